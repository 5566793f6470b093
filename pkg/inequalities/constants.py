"""
Явные константы из доказательств и поиск порогов
"""
import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from utils.errors import RangeError
from utils.logger import setup_logger

logger = setup_logger(__name__)

U_FLOOR = math.log(1e-6)
DEFAULT_CAP = 1e4


def log_gauss_constant(mu: float, q: float) -> float:
    """ln C̄_{μ,q} = μ²/(2(q-1)) + (q+1)(ln 2)²/((q-1)μ²)."""
    return mu ** 2 / (2.0 * (q - 1.0)) + (q + 1.0) * math.log(2.0) ** 2 / ((q - 1.0) * mu ** 2)


def gauss_constant(mu: float, q: float) -> float:
    return math.exp(log_gauss_constant(mu, q))


def _exponent(kind: str, u: float, delta: float, mu: float) -> float:
    """x^δ/μ^δ или (ln(1+x))^δ/μ^δ при x = e^u."""
    if kind == "power":
        power = delta * u - delta * math.log(mu)
        return math.exp(power) if power < 700.0 else math.inf
    return float(np.logaddexp(0.0, u)) ** delta / mu ** delta


def threshold(kind: str, q: float, eps: float, mu: float, delta: float,
              cap: float = DEFAULT_CAP, points: int = 4097) -> Tuple[float, float]:
    """
    Наименьший порог k, за которым x ≤ ε·exp((q-1)·(экспонента)).

    Поиск ведётся по u = ln x: φ(u) = ln ε + (q-1)·(экспонента) - u выпукла,
    последний узел с φ < 0 уточняется бисекцией.

    Args:
        kind: "power" для x^δ, "log" для (ln(1+x))^δ
        cap: Предел поиска по u

    Returns:
        Tuple: (ln k, ln C), C = k·exp(экспонента в k); (-inf, -inf), если φ ≥ 0 везде.

    Raises:
        RangeError: φ остаётся отрицательной до u = cap.
    """
    def phi(u: float) -> float:
        return math.log(eps) + (q - 1.0) * _exponent(kind, u, delta, mu) - u

    def rising(u: float) -> bool:
        ahead = phi(u + 1.0)
        return not math.isfinite(ahead) or ahead > phi(u)

    upper = 1.0
    while phi(upper) <= 0.0 or not rising(upper):
        upper *= 2.0
        if upper > cap:
            raise RangeError(f"порог для ({kind}, q={q}, ε={eps}, μ={mu}, δ={delta}) "
                             f"не найден до ln x = {cap:g}")

    grid = np.linspace(U_FLOOR, upper, points)
    values = np.array([phi(u) for u in grid])
    negative = np.flatnonzero(values < 0.0)
    if negative.size == 0:
        return -math.inf, -math.inf
    j = int(negative[-1])
    u_k = brentq(phi, grid[j], grid[j + 1], xtol=1e-12)
    log_c = u_k + _exponent(kind, u_k, delta, mu)
    logger.debug(f"Порог ({kind}): ln k = {u_k:.6g}, ln C = {log_c:.6g}")
    return float(u_k), float(log_c)


@lru_cache(maxsize=64)
def kbar(gamma: float, lam: float, points: int = 801) -> float:
    """
    k̄_{λ,γ} = sup_{X>1, Y≥0} (XY - 2γ²X(ln X)^{2λ} - Y·exp(γ^{-1/λ}Y^{1/(2λ)}))⁺ на сетке.
    """
    a = gamma ** (-1.0 / lam)
    X = np.exp(np.linspace(1e-9, math.log(1e8), points))[:, None]
    Y = np.concatenate([[0.0], np.exp(np.linspace(math.log(1e-6), math.log(1e8), points))])[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        values = X * Y - 2.0 * gamma ** 2 * X * np.log(X) ** (2.0 * lam) \
            - Y * np.exp(a * Y ** (1.0 / (2.0 * lam)))
    values = np.where(np.isnan(values), -np.inf, values)
    return float(max(0.0, np.max(values)))


def _ktilde_ok(k: float, mu: float, lam: float, x: np.ndarray) -> bool:
    beta = 1.0 / (1.0 + 2.0 * lam)
    ell = np.log(k + x)
    if np.any(ell <= 0.0):
        return False
    curvature = ell + mu * beta * ell ** beta - 2.0 * lam * beta
    if np.any(curvature <= 0.0):
        return False
    # ln l̃'' - ln(верхняя оценка) = ln(x/(k+x)) - ln 2 + ln(curvature/ℓ)
    gap = np.log(x / (k + x)) - math.log(2.0) + np.log(curvature / ell)
    return bool(np.all(gap < 0.0))


@lru_cache(maxsize=64)
def ktilde(mu: float, lam: float, rungs: int = 64, points: int = 2001) -> float:
    """
    Наименьшее k̃ = e·2^j, при котором тестовая функция выпукла, возрастает
    и её вторая производная не превышает оценки на рабочей сетке.
    """
    x = np.exp(np.linspace(math.log(1e-6), math.log(1e8), points))
    for j in range(rungs):
        k = math.e * 2.0 ** j
        if _ktilde_ok(k, mu, lam, x):
            return k
    raise RangeError(f"k̃ не найдено для μ={mu}, λ={lam} за {rungs} шагов")


def dominating_constant(scale: float, eps: float, a: float, lam: float, points: int = 4001) -> float:
    """sup_{x≥0} (scale·x²·e^{a x^{1/λ}} - ε·e^{2a x^{1/λ}})⁺ на логарифмической сетке."""
    x = np.exp(np.linspace(math.log(1e-6), math.log(1e6), points))
    with np.errstate(over="ignore", invalid="ignore"):
        w = np.exp(a * x ** (1.0 / lam))
        values = scale * x ** 2 * w - eps * w * w
    values = np.where(np.isnan(values), -np.inf, values)
    return float(max(0.0, np.max(values)))
