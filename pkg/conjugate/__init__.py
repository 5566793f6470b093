"""
Численное сопряжение Лежандра–Фенхеля и субградиенты
"""
from .tabulated import (
    TabulatedConvexFunction, load_tabulated_csv, save_tabulated_csv, core_from_table, check_grid,
)
from .legendre import (
    ConvexHull1D, legendre_transform, biconjugate_check, fenchel_young_gap,
    numeric_generator, conjugation_report, tabulate_core,
)
from .subgradient import subgradient

__all__ = [
    'TabulatedConvexFunction',
    'load_tabulated_csv',
    'save_tabulated_csv',
    'core_from_table',
    'check_grid',
    'ConvexHull1D',
    'legendre_transform',
    'biconjugate_check',
    'fenchel_young_gap',
    'numeric_generator',
    'conjugation_report',
    'tabulate_core',
    'subgradient',
]
