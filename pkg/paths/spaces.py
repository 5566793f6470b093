"""
Эмпирические статистики пространств интегрируемости
"""
from dataclasses import dataclass

import numpy as np

from utils.errors import InputError

FAMILIES = ("LlnLp", "LexpMuLnLp", "expMuLp")


@dataclass(frozen=True)
class SpaceDescriptor:
    """
    Пространство интегрируемости.

    LlnLp:      |η|(ln(1+|η|))^p, μ не используется;
    LexpMuLnLp: |η|·exp(μ(ln(1+|η|))^p);
    expMuLp:    exp(μ|η|^p) − 1, чтобы подынтегральное выражение обращалось в 0 в нуле.
    """
    family: str
    mu: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"неизвестное семейство пространств '{self.family}'")
        if not (self.mu > 0 and self.p > 0):
            raise InputError(f"μ и p должны быть положительны: μ={self.mu}, p={self.p}")


def space_integrand(samples: np.ndarray, space: SpaceDescriptor) -> np.ndarray:
    a = np.abs(np.asarray(samples, dtype=float))
    with np.errstate(over="ignore"):
        if space.family == "LlnLp":
            return a * np.log1p(a) ** space.p
        if space.family == "LexpMuLnLp":
            return a * np.exp(space.mu * np.log1p(a) ** space.p)
        return np.expm1(space.mu * a ** space.p)


def space_statistic(samples, space: SpaceDescriptor) -> float:
    """
    Эмпирическое среднее определяющего подынтегрального выражения.

    Переполнение дает +∞ (выборка эмпирически вне пространства), NaN не возникает.
    """
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size == 0:
        raise InputError("пустая выборка")
    if np.any(np.isnan(arr)):
        raise InputError("выборка содержит NaN")
    return float(np.mean(space_integrand(arr, space)))
