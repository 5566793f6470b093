"""
Достижимость инфимума на управлении q* ∈ ∂g(t, Z)
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from bsde.solver import BsdeSolution
from duality.penalized import GapRow, PenalizedEstimate, penalized_expectation
from model.functions import CoreFunction, Generator
from paths.ensemble import PathEnsemble
from utils.errors import AttainabilityError
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass
class GapReport:
    """Зазор двойственности для управления q*"""
    estimate: PenalizedEstimate
    y0: float
    y0_std_error: float
    gap: float
    combined_std_error: float
    within_tolerance: bool
    fenchel_young: np.ndarray = field(repr=False)

    @property
    def max_fenchel_young(self) -> float:
        return float(np.max(np.abs(self.fenchel_young))) if self.fenchel_young.size else 0.0

    def row(self) -> GapRow:
        return GapRow.from_estimate(self.estimate, self.y0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "y0": self.y0,
            "estimate": self.estimate.to_dict(),
            "gap": self.gap,
            "combined_std_error": self.combined_std_error,
            "within_tolerance": self.within_tolerance,
            "max_fenchel_young": self.max_fenchel_young,
        }


def optimal_controls(solution: BsdeSolution, gen: Generator) -> np.ndarray:
    """q*_i = выбранный элемент ∂g(t_i, Z_i) на каждом шаге, форма M×N×d."""
    Z = solution.Z
    q = np.empty_like(Z)
    for i in range(Z.shape[1]):
        q[:, i, :] = gen.selector(float(solution.times[i]), Z[:, i, :])
    return q


def attainability_check(solution: BsdeSolution, core: CoreFunction, gen: Generator,
                        ens: PathEnsemble, settings: Optional[Dict[str, Any]] = None) -> GapReport:
    """
    Проверка, что штрафованное ожидание при q* совпадает с Y0.

    ξ берётся из терминального столбца решения. Невязка Фенхеля-Юнга
    f(q*) + g(Z) - Z·q* усредняется по траекториям на каждом шаге.

    Raises:
        AttainabilityError: f(t_i, q*_i) = +∞ хотя бы на одной траектории.
    """
    settings = settings or {}
    abs_tol = float(settings.get("gap_abs_tol", 1e-8))
    q = optimal_controls(solution, gen)

    residuals = np.empty(ens.steps)
    for i in range(ens.steps):
        t = float(solution.times[i])
        penalty = np.asarray(core.func(t, q[:, i, :]), dtype=float)
        bad = np.flatnonzero(~np.isfinite(penalty))
        if bad.size:
            raise AttainabilityError(
                f"q* вне эффективной области f: траектория {bad[0]}, шаг {i}, "
                f"q* = {q[bad[0], i].tolist()}", path=int(bad[0]), step=i)
        z = solution.Z[:, i, :]
        g = np.asarray(gen.func(t, z), dtype=float)
        residuals[i] = float(np.mean(penalty + g - np.sum(z * q[:, i, :], axis=1)))

    estimate = penalized_expectation(ens, solution.Y[:, -1], core, q, control_id="q*",
                                     settings=settings)
    gap = abs(estimate.value - solution.Y0)
    combined = math.hypot(estimate.std_error, solution.y0_std_error)
    within = gap <= 3.0 * combined + abs_tol * (1.0 + abs(solution.Y0))

    report = GapReport(estimate=estimate, y0=solution.Y0, y0_std_error=solution.y0_std_error,
                       gap=gap, combined_std_error=combined, within_tolerance=bool(within),
                       fenchel_young=residuals)
    log = logger.info if within else logger.error
    log(f"Зазор двойственности: |{estimate.value:.6g} - {solution.Y0:.6g}| = {gap:.3g} "
        f"(3σ = {3.0 * combined:.3g}), невязка Ф-Ю ≤ {report.max_fenchel_young:.2g}")
    return report
