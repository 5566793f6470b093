"""
Динамическая выпуклая мера риска ρ_t(X) = -U_t(-X)
"""
from typing import Any, Dict, Optional, Tuple

from bsde.solver import Endowment, evaluate_endowment, solve_lsmc
from model.functions import Generator
from paths.ensemble import PathEnsemble


def risk_measure(ens: PathEnsemble, position: Endowment, gen: Generator,
                 settings: Optional[Dict[str, Any]] = None) -> Tuple[float, float]:
    """ρ_0(X) и его стандартная ошибка."""
    x = evaluate_endowment(ens, position)
    solution = solve_lsmc(ens, -x, gen, settings=settings)
    return -solution.Y0, solution.y0_std_error
