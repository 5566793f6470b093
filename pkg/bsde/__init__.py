"""
Обратный решатель BSDE и точные оракулы
"""
from bsde.regression import BasisSpec, ConditionalRegression, PolynomialBasis, normal_equations
from bsde.solver import (
    BsdeSolution, StepReport, evaluate_endowment, solve_lsmc, split_step,
    standard_form_solve, to_standard_form, two_stage_solve,
)
from bsde.oracles import (
    AFFINE_TAGS, affine_fit, affine_oracle, affine_path, catalogue_oracle, entropic_oracle,
    entropic_oracle_ci,
)

__all__ = [
    'BasisSpec', 'ConditionalRegression', 'PolynomialBasis', 'normal_equations',
    'BsdeSolution', 'StepReport', 'evaluate_endowment', 'solve_lsmc', 'split_step',
    'standard_form_solve', 'to_standard_form', 'two_stage_solve',
    'AFFINE_TAGS', 'affine_fit', 'affine_oracle', 'affine_path', 'catalogue_oracle',
    'entropic_oracle', 'entropic_oracle_ci',
]
