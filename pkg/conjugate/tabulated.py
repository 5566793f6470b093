"""
Табулированные выпуклые функции и их загрузка из CSV
"""
import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from utils.errors import DomainError, GridError, RangeError
from utils.logger import setup_logger

logger = setup_logger(__name__)

INF_TOKENS = ("+inf", "inf", "infinity", "+infinity")


def check_grid(grid) -> np.ndarray:
    """Проверка строгого возрастания сетки."""
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size < 2 or not np.all(np.isfinite(grid)):
        raise GridError("сетка должна содержать не менее двух конечных узлов")
    if np.any(np.diff(grid) <= 0.0):
        raise GridError("сетка не является строго возрастающей")
    return grid


@dataclass(frozen=True)
class TabulatedConvexFunction:
    """
    Значения выпуклой функции на сетке.

    Attributes:
        grid (np.ndarray): Строго возрастающая сетка (для радиальных r ≥ 0).
        values (np.ndarray): Значения в (-∞, +∞].
        radial (bool): Функция зависит только от нормы аргумента.
        extrapolated (np.ndarray): Маска точек, где аргмаксимум на краю сетки.
        argmax (np.ndarray): Аргмаксимумы преобразования, если таблица получена им.
        tolerance (float): Допуск выпуклости для предупреждений ремонта.
    """
    grid: np.ndarray
    values: np.ndarray
    radial: bool = False
    extrapolated: Optional[np.ndarray] = None
    argmax: Optional[np.ndarray] = None
    tolerance: float = 1e-9

    def __post_init__(self):
        grid = check_grid(self.grid)
        values = np.asarray(self.values, dtype=float).ravel()
        if values.shape != grid.shape:
            raise GridError(f"размер значений {values.shape} не совпадает с сеткой {grid.shape}")
        if np.any(np.isnan(values)) or np.any(values == -np.inf):
            raise DomainError("значения должны лежать в (-∞, +∞]")
        if int(np.isfinite(values).sum()) < 3:
            raise DomainError("нужно не менее трех конечных значений")
        if self.radial and grid[0] < 0.0:
            raise GridError("сетка радиального профиля должна быть неотрицательной")
        extrapolated = (np.zeros(grid.shape, dtype=bool) if self.extrapolated is None
                        else np.asarray(self.extrapolated, dtype=bool))
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "extrapolated", extrapolated)

    def repaired(self) -> Tuple["TabulatedConvexFunction", float]:
        """Ремонт нижней выпуклой оболочкой; возвращает таблицу и величину сдвига."""
        from conjugate.legendre import ConvexHull1D

        hull = ConvexHull1D(self.grid, self.values, natural_left=self.radial)
        finite = np.isfinite(self.values)
        repaired = self.values.copy()
        repaired[finite] = hull.values_at_sources()
        deviation = hull.repair_deviation()
        if deviation > self.tolerance:
            logger.warning(f"Ремонт выпуклости сдвинул значения таблицы на {deviation:.3g}")
        table = TabulatedConvexFunction(grid=self.grid, values=repaired, radial=self.radial,
                                        tolerance=self.tolerance)
        return table, deviation

    def _locate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        lo, hi = self.grid[0], self.grid[-1]
        if np.any((x < lo) | (x > hi)):
            raise RangeError(f"точка вне табулированного диапазона [{lo}, {hi}]")
        i = np.clip(np.searchsorted(self.grid, x, side='right') - 1, 0, self.grid.size - 2)
        w = (x - self.grid[i]) / (self.grid[i + 1] - self.grid[i])
        return i, w

    def eval(self, x):
        """Кусочно-линейная интерполяция, вне сетки RangeError."""
        arr = np.asarray(x, dtype=float)
        flat = np.abs(arr.ravel()) if self.radial else arr.ravel()
        i, w = self._locate(flat)
        left, right = self.values[i], self.values[i + 1]
        with np.errstate(invalid="ignore"):
            inner = (1.0 - w) * left + w * right
        values = np.where(w == 0.0, left, np.where(w == 1.0, right, inner))
        values = np.where(np.isnan(values), np.inf, values)
        return float(values[0]) if arr.ndim == 0 else values.reshape(arr.shape)

    __call__ = eval

    def slopes_at(self, x: float) -> Tuple[float, float]:
        """Левый и правый наклоны таблицы в точке x (для радиальных по профилю)."""
        i, w = self._locate(np.array([float(x)]))
        i, w = int(i[0]), float(w[0])
        g, v = self.grid, self.values
        segment = lambda j: (v[j + 1] - v[j]) / (g[j + 1] - g[j])  # noqa: E731
        if 0.0 < w < 1.0:
            s = segment(i)
            return s, s
        j = i if w == 0.0 else i + 1
        left = segment(j - 1) if j > 0 else segment(j)
        right = segment(j) if j < g.size - 1 else segment(j - 1)
        return left, right


def _parse_value(token: str) -> float:
    text = token.strip().lower()
    if text in INF_TOKENS:
        return np.inf
    return float(text)


def load_tabulated_csv(path: Union[str, Path], radial: bool = False) -> TabulatedConvexFunction:
    """
    Загрузка двухколоночного CSV (узел, значение) с токенами +inf.

    Первая строка пропускается, если это заголовок.
    """
    grid, values = [], []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for row_number, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].strip().startswith('#'):
                continue
            try:
                x, v = float(row[0]), _parse_value(row[1])
            except (ValueError, IndexError):
                if row_number == 1:
                    continue
                raise GridError(f"{path}:{row_number}: ожидались два числа, получено {row}")
            grid.append(x)
            values.append(v)
    logger.info(f"Загружена таблица {path}: {len(grid)} узлов")
    return TabulatedConvexFunction(grid=np.array(grid), values=np.array(values), radial=radial)


def save_tabulated_csv(table: TabulatedConvexFunction, path: Union[str, Path]):
    """Сохранение таблицы в CSV с 17 значащими цифрами."""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["grid", "value"])
        for x, v in zip(table.grid, table.values):
            writer.writerow([format(x, '.17g'), "+inf" if np.isposinf(v) else format(v, '.17g')])


def core_from_table(table: TabulatedConvexFunction, growth_class: str, params, h=None,
                    qbar: Optional[Sequence[float]] = None, k: Optional[float] = None):
    """
    Функция штрафа по таблице; вне диапазона таблицы f = +∞.

    Args:
        table (TabulatedConvexFunction): Значения f (для d > 1 радиальный профиль).
        growth_class (str): Объявленный класс A1–A4.
        params (GrowthParams): Константы роста.
        h: Смещение условия (A0).
        qbar: Якорь q̄; по умолчанию точка минимума таблицы.
        k (float): Граница |q̄|.
    """
    from model.functions import CoreClass, CoreFunction, EffectiveDomain, as_offset

    table, _ = table.repaired()
    d = params.dimension
    if d > 1 and not table.radial:
        raise DomainError("при d > 1 табличная функция должна быть радиальной")
    lo, hi = table.grid[0], table.grid[-1]

    def profile(x):
        inside = (x >= lo) & (x <= hi)
        out = np.full(x.shape, np.inf)
        if inside.any():
            out[inside] = table.eval(x[inside])
        return out

    def func(t, q):
        x = np.linalg.norm(q, axis=1) if table.radial else q[:, 0]
        return profile(x)

    if qbar is None:
        best = float(table.grid[int(np.argmin(table.values))])
        anchor = np.zeros(d)
        anchor[0] = 0.0 if table.radial else best
    else:
        anchor = np.atleast_1d(np.asarray(qbar, dtype=float)).reshape(d)
    finite = table.grid[np.isfinite(table.values)]
    domain = (EffectiveDomain(kind="ball", center=0.0, radius=float(finite.max())) if table.radial
              else EffectiveDomain(kind="interval", lower=float(finite.min()), upper=float(finite.max())))

    return CoreFunction(
        func=func, dimension=d, h=as_offset(h), anchor_qbar=lambda t: anchor.copy(),
        k=float(k) if k is not None else float(np.linalg.norm(anchor)),
        growth_class=CoreClass(growth_class), params=params, domain=domain,
        radial_profile=(lambda t, r: profile(r)) if table.radial else None,
    )
