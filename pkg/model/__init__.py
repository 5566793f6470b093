"""
Функции штрафа, генераторы и каталог примеров
"""
from .growth import GrowthParams, check_growth, compute_hbar, sample_convexity, default_grid
from .functions import (
    INF, CoreClass, CoreFunction, EffectiveDomain, Generator, GeneratorClass, Subdifferential,
)
from .catalogue import CATALOGUE_TAGS, build_catalogue_entry

__all__ = [
    'INF',
    'GrowthParams',
    'CoreClass',
    'CoreFunction',
    'EffectiveDomain',
    'Generator',
    'GeneratorClass',
    'Subdifferential',
    'CATALOGUE_TAGS',
    'build_catalogue_entry',
    'check_growth',
    'compute_hbar',
    'sample_convexity',
    'default_grid',
]
