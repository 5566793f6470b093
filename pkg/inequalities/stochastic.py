"""
Проверка оценок для стохастических экспонент методом Монте-Карло
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from inequalities.constants import dominating_constant, kbar, ktilde
from inequalities.specs import InequalitySpec
from paths.density import Control, DensityPath, control_array, density_from_controls
from paths.ensemble import PathEnsemble
from paths.quadrature import lognormal_expectation
from utils.errors import ParamError, RejectedControl
from utils.logger import setup_logger

logger = setup_logger(__name__)

CONTROL_CAP = 1e3


@dataclass
class BoundReport:
    """Оценки левой и правой частей с ошибками"""
    inequality_id: str
    params: Dict[str, float]
    lhs: float
    lhs_std_error: float
    rhs: float
    rhs_std_error: float
    holds: bool
    equality: bool = False
    quadrature: Optional[float] = None
    intermediate: Optional[float] = None

    @property
    def combined_std_error(self) -> float:
        return math.hypot(self.lhs_std_error, self.rhs_std_error)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["combined_std_error"] = self.combined_std_error
        return data

    def row(self) -> Dict[str, Any]:
        """Строка общего отчёта неравенств."""
        return {
            "inequality_id": self.inequality_id,
            "params": ";".join(f"{k}={format(v, '.17g')}" for k, v in sorted(self.params.items())),
            "samples": 0,
            "violations": 0 if self.holds else 1,
            "worst_margin": self.rhs - self.lhs,
        }


def _mean_se(values: np.ndarray):
    m = values.size
    mean = math.fsum(values) / m
    se = float(values.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return mean, se


def _running_integral(density: DensityPath, integrand: np.ndarray) -> np.ndarray:
    """Σ L_{t_i}·integrand_i·dt по траекториям (левые концы)."""
    return np.sum(density.values[:, :-1] * integrand, axis=1) * density.dt


def _checked_controls(ens: PathEnsemble, q: Control) -> np.ndarray:
    arr = control_array(ens, q)
    if not np.isfinite(arr).all():
        raise RejectedControl("управление содержит неконечные значения")
    top = float(np.max(np.abs(arr))) if arr.size else 0.0
    if top > CONTROL_CAP:
        raise RejectedControl(f"управление не ограничено: max|q| = {top:.3g} > {CONTROL_CAP:g}")
    return arr


def _constant_norm(q_arr: np.ndarray) -> Optional[float]:
    norms = np.linalg.norm(q_arr, axis=2)
    first = norms.flat[0]
    return float(first) if np.all(norms == first) else None


def mc_bound_check(spec: InequalitySpec, ens: PathEnsemble, q: Control,
                   quadrature_nodes: int = 120) -> BoundReport:
    """
    Проверка Ê[LHS] ≤ RHS + 3·(совместная ошибка) для управления q.

    Для постоянного |q| левая часть дополнительно считается квадратурой
    по логнормальному L_T.

    Raises:
        RejectedControl: управление неконечно или превышает предел.
        ParamError: неравенство не стохастическое.
    """
    q_arr = _checked_controls(ens, q)
    density = density_from_controls(ens, q_arr)
    norms = np.linalg.norm(q_arr, axis=2)
    log_l = density.log_terminal
    L = np.exp(log_l)
    log1p_l = np.logaddexp(0.0, log_l)
    p = spec.parameters
    horizon = ens.horizon
    const_norm = _constant_norm(q_arr)
    intermediate = None

    if spec.ident == "density_entropy":
        lhs, lhs_se = _mean_se(L * log1p_l)
        rhs_mean, rhs_se = _mean_se(_running_integral(density, norms ** 2))
        rhs = 0.5 * rhs_mean + math.log(2.0)
        rhs_se *= 0.5

        def integrand(l):
            return l * np.log1p(l)

    elif spec.ident == "density_log_power":
        a = p["alpha_star"]
        lhs, lhs_se = _mean_se(L * log1p_l ** (a / 2.0))
        rhs_mean, rhs_se = _mean_se(_running_integral(density, norms ** a))
        factor = math.exp(a * (a - 2.0) * horizon / 8.0)
        rhs = (a / 4.0 * rhs_mean + math.e) * factor
        rhs_se *= a / 4.0 * factor

        def integrand(l):
            return l * np.log1p(l) ** (a / 2.0)

    elif spec.ident == "density_exp_log":
        mu, eps, gamma, lam = p["mu"], p["eps"], p["gamma"], p["lam"]
        beta = 1.0 / (1.0 + 2.0 * lam)
        a = gamma ** (-1.0 / lam)
        lhs, lhs_se = _mean_se(L * np.exp(mu * log1p_l ** beta))

        growth = math.exp(2.0 * gamma ** 2 * mu ** (2.0 * lam + 1.0) * horizon * beta)
        kt = ktilde(mu, lam)
        start = kt * math.exp(mu * math.log(kt) ** beta)
        tail = mu * beta * kbar(gamma, lam) * horizon + start

        weight = np.exp(a * norms ** (1.0 / lam))
        inner, inner_se = _mean_se(_running_integral(density, norms ** 2 * weight))
        intermediate = growth * (mu * beta * inner + tail)

        cbar = dominating_constant(growth * mu * beta, eps, a, lam)
        outer, outer_se = _mean_se(_running_integral(density, eps * weight ** 2 + cbar))
        rhs = outer + growth * tail
        rhs_se = outer_se

        def integrand(l):
            return l * np.exp(mu * np.log1p(l) ** beta)

    else:
        raise ParamError(f"'{spec.ident}' не является стохастическим неравенством",
                         module="inequalities")

    combined = math.hypot(lhs_se, rhs_se)
    holds = lhs <= rhs + 3.0 * combined
    if intermediate is not None:
        inter_se = math.hypot(lhs_se, growth * mu * beta * inner_se)
        holds = holds and lhs <= intermediate + 3.0 * inter_se
    equality = spec.ident == "density_entropy" and bool(np.all(q_arr == 0.0))

    quadrature = None
    if const_norm is not None:
        quadrature = lognormal_expectation(integrand, const_norm, horizon, quadrature_nodes)

    report = BoundReport(inequality_id=spec.ident, params=dict(p), lhs=lhs, lhs_std_error=lhs_se,
                         rhs=rhs, rhs_std_error=rhs_se, holds=bool(holds), equality=equality,
                         quadrature=quadrature, intermediate=intermediate)
    log = logger.info if holds else logger.error
    log(f"{spec.ident}: Ê[LHS] = {lhs:.6g} ± {lhs_se:.2g}, RHS = {rhs:.6g}"
        + (f", квадратура {quadrature:.6g}" if quadrature is not None else ""))
    return report
