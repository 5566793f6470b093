"""
Точные значения для проверки решателя
"""
import math
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

from utils.errors import OracleError, ParamError

AFFINE_TAGS = ("linear_dirac", "drift_band")


def entropic_oracle(samples: np.ndarray, gamma: float) -> float:
    """
    Y0 = -(1/γ) ln E[exp(-γξ)] для энтропийного генератора g(z) = γ|z|²/2.
    """
    if gamma <= 0:
        raise ParamError(f"γ должно быть > 0, получено {gamma}", module="bsde")
    xi = np.asarray(samples, dtype=float).reshape(-1)
    return float(-(logsumexp(-gamma * xi) - math.log(xi.size)) / gamma)


def entropic_oracle_ci(samples: np.ndarray, gamma: float, level: float = 0.95) -> Tuple[float, float, float]:
    """
    Оценка энтропийного оракула с дельта-методом для доверительного интервала.

    Returns:
        Tuple: (значение, нижняя граница, верхняя граница)
    """
    xi = np.asarray(samples, dtype=float).reshape(-1)
    value = entropic_oracle(xi, gamma)
    shift = float(np.max(-gamma * xi))
    w = np.exp(-gamma * xi - shift)
    mean_w = w.mean()
    se_w = w.std(ddof=1) / math.sqrt(xi.size)
    half = float(norm.ppf(0.5 + level / 2.0)) * se_w / (gamma * mean_w)
    return value, value - half, value + half


def affine_oracle(tag: str, a: float, b: float, t: float, horizon: float,
                  qbar: float = 0.0, gamma: float = 1.0, h: float = 0.0) -> float:
    """
    Аффинное ξ = a·B_T + b: значение Y_t при B_t = 0.

    linear_dirac:  Y_t = a·q̄(T-t) + b + h(T-t)
    drift_band:    Y_t = b - γ|a|(T-t)
    """
    remaining = horizon - t
    if tag == "linear_dirac":
        return float(a * qbar * remaining + b + h * remaining)
    if tag == "drift_band":
        return float(b - gamma * abs(a) * remaining)
    raise OracleError(f"нет аффинного оракула для '{tag}'")


def affine_path(tag: str, a: float, b: float, levels: np.ndarray, times: np.ndarray,
                horizon: float, qbar: float = 0.0, gamma: float = 1.0, h: float = 0.0) -> np.ndarray:
    """Y_t = a·B_t + (детерминированная часть) по траекториям."""
    shift = np.array([affine_oracle(tag, a, b, t, horizon, qbar, gamma, h) for t in times])
    return a * np.asarray(levels, dtype=float) + shift[None, :]


def affine_fit(level: np.ndarray, xi: np.ndarray, tol: float = 1e-9) -> Optional[Tuple[float, float]]:
    """(a, b), если ξ = a·B_T + b на всех траекториях, иначе None."""
    level = np.asarray(level, dtype=float).reshape(-1)
    xi = np.asarray(xi, dtype=float).reshape(-1)
    design = np.column_stack([level, np.ones_like(level)])
    (a, b), *_ = np.linalg.lstsq(design, xi, rcond=None)
    residual = np.max(np.abs(design @ np.array([a, b]) - xi)) if xi.size else 0.0
    if residual > tol * (1.0 + np.max(np.abs(xi))):
        return None
    return float(a), float(b)


def catalogue_oracle(core, xi: np.ndarray, level: Optional[np.ndarray], horizon: float) -> Optional[float]:
    """
    Точное Y0 для примеров каталога, где оно известно.

    entropic: выборочный оракул по ξ; linear_dirac и drift_band: при аффинном
    ξ = a·B_T + b (level: значения B_T при d = 1). Иначе None.
    """
    tag = core.catalogue_tag
    if tag == "entropic":
        return entropic_oracle(xi, core.params.gamma)
    if tag in AFFINE_TAGS and level is not None:
        coefficients = affine_fit(level, xi)
        if coefficients is None:
            return None
        a, b = coefficients
        qbar = float(core.anchor_qbar(0.0)[0])
        h = float(core.h(0.0))
        return affine_oracle(tag, a, b, 0.0, horizon, qbar=qbar, gamma=core.params.gamma, h=h)
    return None
