"""
Трёхзначная проверка допустимости управления
"""
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from bsde.solver import Endowment, evaluate_endowment
from duality.penalized import Admissibility, penalty_integral
from model.functions import CoreFunction
from paths.density import Control, DensityPath, control_array, density_from_controls
from paths.ensemble import PathEnsemble
from utils.logger import setup_logger

logger = setup_logger(__name__)


def ui_statistic(density: DensityPath, sizes: Optional[Sequence[int]] = None) -> List[Tuple[int, float, float]]:
    """
    Ê[L_T ln(1 + L_T)] на первых n траекториях для каждого n из sizes.

    Returns:
        List: (n, среднее, стандартная ошибка)
    """
    log_l = density.log_terminal
    m = log_l.size
    sizes = sizes or (m // 2, m)
    values = np.exp(log_l) * np.logaddexp(0.0, log_l)
    out = []
    for n in sizes:
        part = values[:n]
        se = float(part.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        out.append((int(n), math.fsum(part) / n, se))
    return out


@dataclass
class AdmissibilityReport:
    """Вердикт и основания"""
    status: Admissibility
    finite_penalty: bool
    finite_moment: bool
    mean_terminal: float
    mean_std_error: float
    martingale_ok: bool
    ui_half: float
    ui_full: float
    ui_std_error: float
    ui_stable: bool
    reasons: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["status"] = self.status.value
        return data


def admissibility_check(ens: PathEnsemble, endowment: Endowment, core: CoreFunction, q: Control,
                        settings: Optional[Dict[str, Any]] = None) -> AdmissibilityReport:
    """
    yes: штраф конечен, Ê[L_T] ∈ 1 ± 4σ и Ê[L ln(1+L)] устойчива при удвоении M;
    no: штраф бесконечен; иначе inconclusive.
    """
    settings = settings or {}
    sigmas = float(settings.get("martingale_sigmas", 4.0))

    q_arr = control_array(ens, q)
    xi = evaluate_endowment(ens, endowment)
    density = density_from_controls(ens, q_arr)
    weights = density.terminal
    reasons = []

    penalty = penalty_integral(ens, core, q_arr) if np.isfinite(q_arr).all() else np.array([np.inf])
    finite_penalty = bool(np.isfinite(penalty).all())
    if not finite_penalty:
        reasons.append("f(t, q_t) = +∞ на части траекторий")

    moment = np.mean(weights * (np.abs(xi) + np.abs(penalty))) if finite_penalty else np.inf
    finite_moment = bool(np.isfinite(moment))
    if finite_penalty and not finite_moment:
        reasons.append("момент E_Q[|ξ| + ∫|f|] не конечен на выборке")

    mean, se = density.martingale_diagnostic()
    martingale_ok = abs(mean - 1.0) <= sigmas * se + 1e-12
    if not martingale_ok:
        reasons.append(f"Ê[L_T] = {mean:.6f} вне 1 ± {sigmas:g}σ")

    (_, half, _), (_, full, full_se) = ui_statistic(density)
    ui_stable = bool(np.isfinite(full) and abs(half - full) <= sigmas * full_se + 1e-12)
    if not ui_stable:
        reasons.append(f"Ê[L ln(1+L)] неустойчива: {half:.6g} на M/2 против {full:.6g} на M")

    if not finite_penalty:
        status = Admissibility.NO
    elif finite_moment and martingale_ok and ui_stable:
        status = Admissibility.YES
    else:
        status = Admissibility.INCONCLUSIVE
        logger.warning(f"Допустимость не установлена: {'; '.join(reasons)}")

    return AdmissibilityReport(status=status, finite_penalty=finite_penalty,
                               finite_moment=finite_moment, mean_terminal=mean,
                               mean_std_error=se, martingale_ok=bool(martingale_ok),
                               ui_half=half, ui_full=full, ui_std_error=full_se,
                               ui_stable=ui_stable, reasons=reasons)
