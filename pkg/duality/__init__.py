"""
Двойственная сторона: штрафованные ожидания, достижимость, допустимость, аксиомы
"""
from duality.penalized import (
    GAP_COLUMNS, Admissibility, ControlScan, GapRow, PenalizedEstimate, WeightDiagnostics,
    constant_controls, penalized_expectation, penalty_integral, scan_constant_controls,
    weight_diagnostics, write_gap_csv,
)
from duality.attainability import GapReport, attainability_check, optimal_controls
from duality.admissibility import AdmissibilityReport, admissibility_check, ui_statistic
from duality.axioms import AXIOMS, AxiomReport, AxiomResult, axiom_suite
from duality.risk import risk_measure

__all__ = [
    'GAP_COLUMNS', 'Admissibility', 'ControlScan', 'GapRow', 'PenalizedEstimate',
    'WeightDiagnostics', 'constant_controls', 'penalized_expectation', 'penalty_integral',
    'scan_constant_controls', 'weight_diagnostics', 'write_gap_csv',
    'GapReport', 'attainability_check', 'optimal_controls',
    'AdmissibilityReport', 'admissibility_check', 'ui_statistic',
    'AXIOMS', 'AxiomReport', 'AxiomResult', 'axiom_suite',
    'risk_measure',
]
