"""
Квадратуры Гаусса–Эрмита для гауссовских оракулов
"""
from typing import Callable

import numpy as np
from numpy.polynomial.hermite_e import hermegauss


def gaussian_expectation(fn: Callable[[np.ndarray], np.ndarray], nodes: int = 120,
                         scale: float = 1.0) -> float:
    """E[fn(σX)], X ~ N(0,1), квадратурой с вероятностным весом exp(−x²/2)."""
    x, w = hermegauss(nodes)
    return float(np.sum(w * fn(scale * x)) / np.sqrt(2.0 * np.pi))


def lognormal_expectation(fn: Callable[[np.ndarray], np.ndarray], q: float, horizon: float = 1.0,
                          nodes: int = 120) -> float:
    """E[fn(L)] для L = exp(qB_T − q²T/2)."""
    return gaussian_expectation(
        lambda x: fn(np.exp(q * np.sqrt(horizon) * x - 0.5 * q ** 2 * horizon)), nodes=nodes)
