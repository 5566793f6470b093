"""
Поточечная проверка неравенств на случайной выборке

Все неравенства, кроме fenchel_exp, сравниваются в логарифмах:
ln(левая часть) ≤ ln(правая часть), правые части собираются через logaddexp.
"""
import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Tuple, Union

import numpy as np
from scipy.special import xlogy

from inequalities.constants import log_gauss_constant, threshold
from inequalities.specs import InequalitySpec, sample_points
from utils.errors import ParamError
from utils.logger import setup_logger

logger = setup_logger(__name__)

RELATIVE_SLACK = 1e-12
REPORT_COLUMNS = ["inequality_id", "params", "samples", "violations", "worst_margin"]

Sides = List[Tuple[np.ndarray, np.ndarray]]


def _log(v: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(v)


def _log_expm1(u: np.ndarray) -> np.ndarray:
    """ln(e^u - 1), u ≥ 0."""
    with np.errstate(divide="ignore"):
        small = np.log(np.expm1(np.minimum(u, 30.0)))
    return np.where(u > 30.0, u + np.log1p(-np.exp(-np.maximum(u, 30.0))), small)


def _log_exp_remainder(u: np.ndarray) -> np.ndarray:
    """ln(e^u - 1 - u), u ≥ 0, без потери точности около нуля."""
    small = u < 1e-3
    us = np.where(small, u, 0.0)
    um = np.clip(u, 1e-3, 30.0)
    ul = np.maximum(u, 30.0)
    with np.errstate(divide="ignore", over="ignore"):
        series = np.log(0.5 * us ** 2 * (1.0 + us / 3.0 + us ** 2 / 12.0 + us ** 3 / 60.0))
        middle = np.log(np.expm1(um) - um)
        large = ul + np.log1p(-(1.0 + ul) * np.exp(-ul))
    return np.where(small, series, np.where(u > 30.0, large, middle))


def _log_entropy_remainder(y: np.ndarray) -> np.ndarray:
    """ln((1+y)ln(1+y) - y), y ≥ 0."""
    small = y < 1e-3
    ys = np.where(small, y, 0.0)
    yl = np.maximum(y, 1e-3)
    with np.errstate(divide="ignore"):
        series = np.log(0.5 * ys ** 2 * (1.0 - ys / 3.0 + ys ** 2 / 6.0 - ys ** 3 / 10.0))
        out = np.where(small, series, np.log((1.0 + yl) * np.log1p(yl) - yl))
    return np.where(y == 0.0, -np.inf, out)


def _young_integral(x, y, p) -> Sides:
    mu = p["mu"]
    lx, ly, lm = _log(x), _log(y), np.log(mu)
    integral = np.logaddexp(lm + _log_exp_remainder(x / mu), lm + _log_entropy_remainder(y))
    with np.errstate(divide="ignore"):
        endpoint = np.logaddexp(lx + _log_expm1(x / mu), lm + ly + np.log(np.log1p(y)))
    return [(lx + ly, integral), (integral, endpoint)]


def _young_exp_power(x, y, p) -> Sides:
    mu, delta = p["mu"], p["delta"]
    lx, ly = _log(x), _log(y)
    with np.errstate(divide="ignore"):
        rhs = np.logaddexp(lx + (x / mu) ** delta,
                           np.log(mu) + ly + np.log(np.log1p(y)) / delta)
    return [(lx + ly, rhs)]


def _young_exp_log(x, y, p) -> Sides:
    mu, delta = p["mu"], p["delta"]
    lx, ly = _log(x), _log(y)
    rhs = np.logaddexp(lx + np.log1p(x) ** delta / mu ** delta,
                       ly + mu * np.log1p(y) ** (1.0 / delta))
    return [(lx + ly, rhs)]


def _young_exp_power_eps(x, y, p) -> Sides:
    mu, delta, q, eps = p["mu"], p["delta"], p["q"], p["eps"]
    _, log_c = threshold("power", q, eps, mu, delta)
    lx, ly = _log(x), _log(y)
    with np.errstate(divide="ignore"):
        rhs = np.logaddexp.reduce([
            np.log(eps) + q * (x / mu) ** delta,
            np.log(mu) + ly + np.log(np.log1p(y)) / delta,
            np.full_like(x, log_c),
        ])
    return [(lx + ly, rhs)]


def _young_exp_log_eps(x, y, p) -> Sides:
    mu, delta, q, eps = p["mu"], p["delta"], p["q"], p["eps"]
    _, log_c = threshold("log", q, eps, mu, delta)
    lx, ly = _log(x), _log(y)
    rhs = np.logaddexp.reduce([
        np.log(eps) + q * np.log1p(x) ** delta / mu ** delta,
        ly + mu * np.log1p(y) ** (1.0 / delta),
        np.full_like(x, log_c),
    ])
    return [(lx + ly, rhs)]


def _young_exp_linear(x, y, p) -> Sides:
    mu = p["mu"]
    lx, ly, lm = _log(x), _log(y), np.log(mu)
    with np.errstate(divide="ignore"):
        rhs = np.logaddexp(lm + x / mu, lm + ly + np.log(np.log1p(y)))
    return [(lx + ly, rhs)]


def _young_exp_gauss(x, y, p) -> Sides:
    mu, q = p["mu"], p["q"]
    ly = _log(y)
    rhs = np.logaddexp(log_gauss_constant(mu, q) + q * x ** 2 / mu ** 2,
                       ly + mu * np.sqrt(np.log1p(y)))
    return [(ly + x, rhs)]


def _young_power(x, y, p) -> Sides:
    mu, delta = p["mu"], p["delta"]
    conj = delta / (delta - 1.0)
    lx, ly = _log(x), _log(y)
    rhs = np.logaddexp(np.log(mu) + delta * lx, -np.log(mu) / (delta - 1.0) + conj * ly)
    return [(lx + ly, rhs)]


def _exp_gauss_reference(x, y, p) -> Sides:
    mu = p["mu"]
    ly = _log(y)
    rhs = np.logaddexp(x ** 2 / mu ** 2, mu ** 2 + ly + mu * np.sqrt(np.log1p(y)))
    return [(ly + x, rhs)]


def _young_classic(x, y, p) -> Sides:
    delta = p["delta"]
    conj = delta / (delta - 1.0)
    lx, ly = _log(x), _log(y)
    rhs = np.logaddexp(delta * lx - np.log(delta), conj * ly - np.log(conj))
    return [(lx + ly, rhs)]


def _fenchel_exp(x, y, p) -> Sides:
    with np.errstate(over="ignore"):
        rhs = np.exp(x) + xlogy(y, y) - y
    return [(x * y, rhs)]


LOG_SIDES: Dict[str, Callable[[np.ndarray, np.ndarray, Dict[str, float]], Sides]] = {
    "young_integral": _young_integral,
    "young_exp_power": _young_exp_power,
    "young_exp_log": _young_exp_log,
    "young_exp_power_eps": _young_exp_power_eps,
    "young_exp_log_eps": _young_exp_log_eps,
    "young_exp_linear": _young_exp_linear,
    "young_exp_gauss": _young_exp_gauss,
    "young_power": _young_power,
    "exp_gauss_reference": _exp_gauss_reference,
    "young_classic": _young_classic,
}
LINEAR_SIDES = {"fenchel_exp": _fenchel_exp}


def margins(lhs: np.ndarray, rhs: np.ndarray, linear: bool) -> Tuple[np.ndarray, np.ndarray]:
    """
    Запас rhs - lhs и маска нарушений с относительным допуском.
    """
    with np.errstate(invalid="ignore"):
        margin = rhs - lhs
    margin = np.where(np.isneginf(lhs) | np.isposinf(rhs), np.inf, margin)
    if linear:
        scale = 1.0 + np.abs(lhs) + np.where(np.isfinite(rhs), np.abs(rhs), 0.0)
    else:
        scale = np.maximum(1.0, np.where(np.isfinite(rhs), np.abs(rhs), 0.0))
    violated = (margin < -RELATIVE_SLACK * scale) | np.isnan(margin)
    return margin, violated


@dataclass
class ViolationReport:
    """Итог поточечной проверки одного набора параметров"""
    inequality_id: str
    params: Dict[str, float]
    samples: int
    violations: int
    worst_margin: float
    examples: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def row(self) -> Dict[str, Union[str, int, float]]:
        return {
            "inequality_id": self.inequality_id,
            "params": ";".join(f"{k}={format(v, '.17g')}" for k, v in sorted(self.params.items())),
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
        }


def check_pointwise(spec: InequalitySpec, samples: int = 100_000, seed: int = 0) -> ViolationReport:
    """
    Проверка неравенства на samples случайных точках.

    Raises:
        ParamError: неравенство не поточечное.
        RangeError: порог для констант с поиском не найден.
    """
    ident = spec.ident
    linear = ident in LINEAR_SIDES
    sides_fn = LINEAR_SIDES.get(ident) or LOG_SIDES.get(ident)
    if sides_fn is None:
        raise ParamError(f"'{ident}' не является поточечным неравенством", module="inequalities")

    x, y = sample_points(spec, samples, seed)
    worst = np.inf
    violated = np.zeros(samples, dtype=bool)
    for lhs, rhs in sides_fn(x, y, spec.parameters):
        margin, bad = margins(lhs, rhs, linear)
        worst = min(worst, float(np.min(margin)))
        violated |= bad

    idx = np.flatnonzero(violated)
    report = ViolationReport(inequality_id=ident, params=dict(spec.parameters), samples=samples,
                             violations=int(idx.size), worst_margin=worst,
                             examples=[(float(x[i]), float(y[i])) for i in idx[:5]])
    if report.violations:
        logger.error(f"{ident} ({spec.describe_params()}): {report.violations} нарушений, "
                     f"например (x, y) = {report.examples[0]}")
    else:
        logger.debug(f"{ident}: нарушений нет, минимальный запас {worst:.3g}")
    return report


def write_report_csv(rows: List[Dict[str, Union[str, int, float]]], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow([format(row[c], ".17g") if isinstance(row[c], float) else row[c]
                             for c in REPORT_COLUMNS])
    return path
