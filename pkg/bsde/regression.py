"""
Регрессионные условные ожидания на полиномиальном базисе состояния
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from itertools import combinations_with_replacement
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class BasisSpec:
    """Описание базиса регрессии"""
    family: str = "polynomial"
    degree: int = 4

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class PolynomialBasis:
    """
    Мономы полной степени ≤ degree от стандартизованных признаков.
    """

    def __init__(self, features: np.ndarray, degree: int):
        features = np.asarray(features, dtype=float).reshape(features.shape[0], -1)
        self.center = features.mean(axis=0)
        scale = features.std(axis=0)
        self.active = scale > 1e-14 * (1.0 + np.abs(self.center))
        self.scale = np.where(self.active, scale, 1.0)
        self.degree = int(degree) if self.active.any() else 0

        columns = list(np.flatnonzero(self.active))
        self.exponents: List[Tuple[int, ...]] = [()]
        for power in range(1, self.degree + 1):
            self.exponents.extend(combinations_with_replacement(columns, power))

    @property
    def size(self) -> int:
        return len(self.exponents)

    def design(self, features: np.ndarray) -> np.ndarray:
        z = (np.asarray(features, dtype=float).reshape(features.shape[0], -1) - self.center) / self.scale
        out = np.ones((z.shape[0], self.size))
        for j, term in enumerate(self.exponents[1:], start=1):
            col = out[:, j]
            for axis in term:
                col *= z[:, axis]
        return out


def _block_ranges(rows: int, block: int) -> List[Tuple[int, int]]:
    return [(start, min(start + block, rows)) for start in range(0, rows, block)]


def normal_equations(design: np.ndarray, targets: np.ndarray, block: int = 8192,
                     threads: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    XᵀX и XᵀY, накопленные по блокам фиксированного размера в фиксированном порядке.

    Частичные суммы блоков считаются параллельно, а складываются всегда
    в порядке блоков, поэтому результат не зависит от числа потоков.
    """
    ranges = _block_ranges(design.shape[0], block)

    def partial(bounds):
        s, e = bounds
        x = design[s:e]
        return np.einsum('ij,ik->jk', x, x), np.einsum('ij,ik->jk', x, targets[s:e])

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(partial, ranges))
    else:
        parts = [partial(r) for r in ranges]

    gram = np.zeros((design.shape[1], design.shape[1]))
    rhs = np.zeros((design.shape[1], targets.shape[1]))
    for a, b in parts:
        gram += a
        rhs += b
    return gram, rhs


class ConditionalRegression:
    """
    Проекция на базис признаков одного шага.

    При плохой обусловленности матрицы Грама степень понижается с предупреждением.
    """

    def __init__(self, features: np.ndarray, degree: int, block: int = 8192, threads: int = 1,
                 condition_limit: float = 1e12, step: int = -1):
        self.features = features
        self.block = block
        self.threads = threads
        self.degree_requested = int(degree)

        for deg in range(int(degree), -1, -1):
            basis = PolynomialBasis(features, deg)
            design = basis.design(features)
            gram, _ = normal_equations(design, np.zeros((design.shape[0], 0)), block, threads)
            cond = np.linalg.cond(gram)
            if np.isfinite(cond) and cond < condition_limit:
                break
            logger.warning(f"Шаг {step}: матрица Грама плохо обусловлена (cond={cond:.3g}), "
                           f"степень базиса понижена с {deg}")
        self.basis = basis
        self.design = design
        self.factor = cho_factor(gram)

    @property
    def degree(self) -> int:
        return self.basis.degree

    def project(self, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Условные ожидания столбцов targets.

        Returns:
            Tuple: подогнанные значения, коэффициенты, R² по столбцам.
        """
        targets = np.asarray(targets, dtype=float)
        flat = targets.reshape(targets.shape[0], -1)
        _, rhs = normal_equations(self.design, flat, self.block, self.threads)
        coefficients = cho_solve(self.factor, rhs)
        fitted = self.design @ coefficients

        total = np.sum((flat - flat.mean(axis=0)) ** 2, axis=0)
        residual = np.sum((flat - fitted) ** 2, axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            r2 = np.where(total > 0.0, 1.0 - residual / total, 1.0)
        return fitted.reshape(targets.shape), coefficients, r2
