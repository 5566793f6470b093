"""
Поточечные неравенства типа Юнга и оценки для стохастических экспонент
"""
from inequalities.specs import (
    DEFAULTS, POINTWISE_IDS, REGISTRY, STOCHASTIC_IDS, ConstantSource, InequalitySpec,
    SampleDomain, draw_parameters, make_spec, sample_points,
)
from inequalities.constants import (
    dominating_constant, gauss_constant, kbar, ktilde, log_gauss_constant, threshold,
)
from inequalities.pointwise import (
    REPORT_COLUMNS, ViolationReport, check_pointwise, margins, write_report_csv,
)
from inequalities.stochastic import CONTROL_CAP, BoundReport, mc_bound_check

__all__ = [
    'DEFAULTS', 'POINTWISE_IDS', 'REGISTRY', 'STOCHASTIC_IDS', 'ConstantSource',
    'InequalitySpec', 'SampleDomain', 'draw_parameters', 'make_spec', 'sample_points',
    'dominating_constant', 'gauss_constant', 'kbar', 'ktilde', 'log_gauss_constant', 'threshold',
    'REPORT_COLUMNS', 'ViolationReport', 'check_pointwise', 'margins', 'write_report_csv',
    'CONTROL_CAP', 'BoundReport', 'mc_bound_check',
]
