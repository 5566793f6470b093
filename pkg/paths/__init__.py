"""
Броуновские ансамбли, стохастические экспоненты и пространства интегрируемости
"""
from .ensemble import PathEnsemble, generate, forward_sde, dump_paths_csv
from .density import DensityPath, stochastic_exponential, density_from_controls, control_array
from .spaces import SpaceDescriptor, space_statistic
from .quadrature import gaussian_expectation, lognormal_expectation

__all__ = [
    'PathEnsemble',
    'generate',
    'forward_sde',
    'dump_paths_csv',
    'DensityPath',
    'stochastic_exponential',
    'density_from_controls',
    'control_array',
    'SpaceDescriptor',
    'space_statistic',
    'gaussian_expectation',
    'lognormal_expectation',
]
