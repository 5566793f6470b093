"""
Штрафованные ожидания E_{Q^q}[ξ + ∫f(s, q_s)ds] под перевзвешенной мерой
"""
import csv
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from bsde.regression import ConditionalRegression
from bsde.solver import Endowment, evaluate_endowment
from model.functions import INF, CoreFunction
from paths.density import Control, control_array, density_from_controls
from paths.ensemble import PathEnsemble
from utils.errors import InputError
from utils.logger import setup_logger

logger = setup_logger(__name__)

GAP_COLUMNS = ["control_id", "value", "std_error", "gap_vs_Y0", "ess", "admissible"]


class Admissibility(Enum):
    """Трёхзначный вердикт допустимости управления"""
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass
class WeightDiagnostics:
    """Диагностика весов L_T"""
    mean_terminal: float
    mean_std_error: float
    effective_sample_size: float
    max_weight_share: float
    martingale_ok: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class PenalizedEstimate:
    """
    Оценка штрафованного ожидания.

    conditional заполняется только для t > 0: регрессионная оценка
    условного ожидания по траекториям.
    """
    value: float
    std_error: float
    weight_diagnostics: WeightDiagnostics
    admissible: Admissibility
    control_id: str = ""
    conditional: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "control_id": self.control_id,
            "value": self.value,
            "std_error": self.std_error,
            "weights": self.weight_diagnostics.to_dict(),
            "admissible": self.admissible.value,
        }


def weight_diagnostics(log_weights: np.ndarray, martingale_sigmas: float = 4.0) -> WeightDiagnostics:
    """
    Диагностика весов по их логарифмам.

    ESS по Кишу: (Σw)²/Σw², вычисленная в логарифмах.
    """
    m = log_weights.size
    log_sum = logsumexp(log_weights)
    ess = float(np.exp(2.0 * log_sum - logsumexp(2.0 * log_weights)))
    share = float(np.exp(np.max(log_weights) - log_sum))
    weights = np.exp(log_weights)
    mean = float(weights.mean())
    se = float(weights.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    ok = abs(mean - 1.0) <= martingale_sigmas * se + 1e-12
    return WeightDiagnostics(mean_terminal=mean, mean_std_error=se,
                             effective_sample_size=min(ess, float(m)),
                             max_weight_share=share, martingale_ok=bool(ok))


def penalty_integral(ens: PathEnsemble, core: CoreFunction, q: np.ndarray, start: int = 0) -> np.ndarray:
    """Σ_{i ≥ start} f(t_i, q_i) dt по траекториям."""
    total = np.zeros(ens.paths)
    for i in range(start, ens.steps):
        total += np.asarray(core.func(float(ens.times[i]), q[:, i, :]), dtype=float) * ens.dt
    return total


def penalized_expectation(ens: PathEnsemble, endowment: Endowment, core: CoreFunction,
                          q: Control, t: float = 0.0, control_id: str = "",
                          settings: Optional[Dict[str, Any]] = None) -> PenalizedEstimate:
    """
    Оценка Ê[L^q_{t,T}(ξ + Σ f(t_i, q_i) dt)].

    Args:
        ens: Ансамбль
        endowment: ξ
        core: Функция штрафа f
        q: Управление (константа, вектор, массив M×N×d или функция (t, x))
        t: Момент сетки; при t > 0 условное ожидание строится регрессией
        control_id: Метка строки отчёта
        settings: Секция duality настроек
    """
    settings = settings or {}
    floor_ratio = float(settings.get("ess_floor_ratio", 0.01))
    sigmas = float(settings.get("martingale_sigmas", 4.0))

    start = int(round(t / ens.dt))
    if abs(start * ens.dt - t) > 1e-9 * max(1.0, ens.horizon) or not 0 <= start < ens.steps:
        raise InputError(f"момент t = {t} не является узлом сетки")

    q_arr = control_array(ens, q)
    if not np.isfinite(q_arr).all():
        raise InputError("управление q содержит неконечные значения")
    xi = evaluate_endowment(ens, endowment)

    density = density_from_controls(ens, q_arr)
    log_w = density.log_values[:, -1] - density.log_values[:, start]
    diagnostics = weight_diagnostics(log_w, sigmas)

    penalty = penalty_integral(ens, core, q_arr, start)
    if not np.isfinite(penalty).all():
        logger.info(f"Управление {control_id or 'q'}: штраф бесконечен, оценка +∞")
        return PenalizedEstimate(value=INF, std_error=0.0, weight_diagnostics=diagnostics,
                                 admissible=Admissibility.NO, control_id=control_id)

    weighted = np.exp(log_w) * (xi + penalty)
    conditional = None
    if start == 0:
        value = float(weighted.mean())
        std_error = float(weighted.std(ddof=1) / math.sqrt(ens.paths)) if ens.paths > 1 else 0.0
    else:
        reg = ConditionalRegression(ens.factors(start), int(settings.get("degree", 4)), step=start)
        fitted, _, _ = reg.project(weighted[:, None])
        conditional = fitted[:, 0]
        value = float(conditional.mean())
        std_error = float(np.std(weighted - conditional, ddof=1) / math.sqrt(ens.paths))

    admissible = Admissibility.YES
    if diagnostics.effective_sample_size < floor_ratio * ens.paths or not diagnostics.martingale_ok:
        admissible = Admissibility.INCONCLUSIVE
        logger.warning(f"Управление {control_id or 'q'}: веса вырождены или Ê[L_T] далеко от 1 "
                       f"(ESS={diagnostics.effective_sample_size:.1f}, "
                       f"Ê[L_T]={diagnostics.mean_terminal:.4f})")

    return PenalizedEstimate(value=value, std_error=std_error, weight_diagnostics=diagnostics,
                             admissible=admissible, control_id=control_id, conditional=conditional)


@dataclass
class GapRow:
    """Строка отчёта о зазоре двойственности"""
    control_id: str
    value: float
    std_error: float
    gap_vs_Y0: float
    ess: float
    admissible: str

    @classmethod
    def from_estimate(cls, estimate: PenalizedEstimate, y0: float) -> "GapRow":
        return cls(control_id=estimate.control_id, value=estimate.value,
                   std_error=estimate.std_error, gap_vs_Y0=estimate.value - y0,
                   ess=estimate.weight_diagnostics.effective_sample_size,
                   admissible=estimate.admissible.value)


def write_gap_csv(rows: List[GapRow], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(GAP_COLUMNS)
        for row in rows:
            values = asdict(row)
            writer.writerow([format(values[c], ".17g") if isinstance(values[c], float) else values[c]
                             for c in GAP_COLUMNS])
    return path


@dataclass
class ControlScan:
    """Семейство постоянных управлений и нижняя граница"""
    estimates: List[PenalizedEstimate]
    y0: float
    y0_std_error: float
    lower_bound_ok: bool
    separated: bool
    min_value: float

    def rows(self) -> List[GapRow]:
        return [GapRow.from_estimate(e, self.y0) for e in self.estimates]


def constant_controls(core: CoreFunction, box: Tuple[float, float], count: int) -> List[np.ndarray]:
    """Постоянные управления q·e_1 на пересечении эффективной области с box."""
    lo, hi = core.domain.clip_interval(box)
    d = core.dimension
    levels = [lo] if hi <= lo else np.linspace(lo, hi, count)
    out = []
    for level in levels:
        vec = np.zeros(d)
        vec[0] = float(level)
        out.append(vec)
    return out


def scan_constant_controls(ens: PathEnsemble, endowment: Endowment, core: CoreFunction,
                           y0: float, y0_std_error: float = 0.0,
                           box: Optional[Tuple[float, float]] = None, count: Optional[int] = None,
                           settings: Optional[Dict[str, Any]] = None) -> ControlScan:
    """
    Нижняя граница по семейству допустимых постоянных управлений.

    Каждое значение должно быть ≥ Y0 - 3·(совместная ошибка); хотя бы одно
    управление должно превышать Y0 на separation_margin, если область не точка.
    """
    settings = settings or {}
    box = tuple(box or settings.get("control_box", (-3.0, 3.0)))
    count = int(count or settings.get("control_count", 50))
    margin = float(settings.get("separation_margin", 0.05))

    xi = evaluate_endowment(ens, endowment)
    estimates = []
    for j, vec in enumerate(constant_controls(core, box, count)):
        est = penalized_expectation(ens, xi, core, vec, control_id=f"const_{j:02d}_{vec[0]:+.4f}",
                                    settings=settings)
        if est.admissible is not Admissibility.NO:
            estimates.append(est)

    finite = [e for e in estimates if np.isfinite(e.value)]
    lower_ok = all(e.value >= y0 - 3.0 * math.hypot(e.std_error, y0_std_error) for e in finite)
    separated = len(finite) <= 1 or any(e.value > y0 + margin for e in finite)
    min_value = min((e.value for e in finite), default=INF)
    logger.info(f"Сканирование {len(finite)} постоянных управлений: минимум {min_value:.6g}, "
                f"Y0 = {y0:.6g}")
    return ControlScan(estimates=estimates, y0=y0, y0_std_error=y0_std_error,
                       lower_bound_ok=lower_ok, separated=separated, min_value=min_value)
