"""
Функция штрафа f, генератор g и субдифференциалы
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np

from model.growth import GrowthParams
from utils.logger import setup_logger

logger = setup_logger(__name__)

# Расширенная вещественная +∞: f = INF вне эффективной области
INF = float("inf")

OffsetMap = Callable[[float], float]
PointMap = Callable[[float, np.ndarray], np.ndarray]


class CoreClass(Enum):
    """Классы роста функции штрафа"""
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    UNCLASSIFIED = "Unclassified"


class GeneratorClass(Enum):
    """Классы роста генератора"""
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    H4 = "H4"


def as_offset(h: Union[float, OffsetMap, None]) -> OffsetMap:
    """Приведение числа или функции времени к отображению t -> h(t)."""
    if h is None:
        return lambda t: 0.0
    if callable(h):
        return h
    value = float(h)
    return lambda t: value


def as_points(x: Any, dimension: int) -> Tuple[np.ndarray, bool]:
    """
    Приведение аргумента к массиву точек формы (n, d).

    Returns:
        Tuple[np.ndarray, bool]: Точки и признак скалярного входа.
    """
    arr = np.asarray(x, dtype=float)
    if dimension == 1:
        if arr.ndim == 0:
            return arr.reshape(1, 1), True
        return arr.reshape(-1, 1), False
    if arr.ndim == 1 and arr.shape[0] == dimension:
        return arr.reshape(1, dimension), True
    return arr.reshape(-1, dimension), False


def _shape_back(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


@dataclass(frozen=True)
class EffectiveDomain:
    """
    Описание эффективной области {q : f(t, q) < +∞}.

    kind: "all", "ball" (центр и радиус), "interval" (только d = 1), "point".
    """
    kind: str = "all"
    center: float = 0.0
    radius: float = INF
    lower: float = -INF
    upper: float = INF

    def clip_interval(self, box: Tuple[float, float]) -> Tuple[float, float]:
        """Пересечение области (по первой координате) с отрезком box."""
        if self.kind == "point":
            return self.center, self.center
        if self.kind == "ball":
            lo, hi = self.center - self.radius, self.center + self.radius
        else:
            lo, hi = self.lower, self.upper
        return max(lo, box[0]), min(hi, box[1])


@dataclass(frozen=True)
class Subdifferential:
    """
    Множество ∂g(t, z).

    kind: "point" (center), "ball" (center, radius), "interval" (lower, upper; d = 1).
    """
    kind: str
    center: np.ndarray
    radius: float = 0.0
    lower: float = 0.0
    upper: float = 0.0

    @classmethod
    def point(cls, value) -> "Subdifferential":
        return cls(kind="point", center=np.atleast_1d(np.asarray(value, dtype=float)))

    @classmethod
    def ball(cls, center, radius: float) -> "Subdifferential":
        return cls(kind="ball", center=np.atleast_1d(np.asarray(center, dtype=float)), radius=float(radius))

    @classmethod
    def interval(cls, lower: float, upper: float) -> "Subdifferential":
        if upper - lower <= 0.0:
            return cls.point(lower)
        return cls(kind="interval", center=np.array([0.5 * (lower + upper)]),
                   lower=float(lower), upper=float(upper))

    def min_norm(self) -> np.ndarray:
        """Элемент множества с минимальной евклидовой нормой."""
        if self.kind == "point":
            return self.center.copy()
        if self.kind == "interval":
            return np.array([min(max(0.0, self.lower), self.upper)])
        norm = float(np.linalg.norm(self.center))
        if norm <= self.radius:
            return np.zeros_like(self.center)
        return self.center * (1.0 - self.radius / norm)

    def contains(self, q, tol: float = 1e-9) -> bool:
        q = np.atleast_1d(np.asarray(q, dtype=float))
        if self.kind == "point":
            return bool(np.linalg.norm(q - self.center) <= tol)
        if self.kind == "interval":
            return bool(self.lower - tol <= q[0] <= self.upper + tol)
        return bool(np.linalg.norm(q - self.center) <= self.radius + tol)

    def to_dict(self) -> Dict[str, Any]:
        data = {"kind": self.kind, "center": self.center.tolist()}
        if self.kind == "ball":
            data["radius"] = self.radius
        if self.kind == "interval":
            data.update({"lower": self.lower, "upper": self.upper})
        return data


@dataclass(frozen=True)
class CoreFunction:
    """
    Выпуклая функция штрафа f(t, q) со значениями в (-∞, +∞].

    func принимает время и массив точек формы (n, d) и возвращает (n,).
    radial_profile, если задан, описывает f как φ(t, |q|).
    """
    func: PointMap
    dimension: int
    h: OffsetMap
    anchor_qbar: Callable[[float], np.ndarray]
    k: float
    growth_class: CoreClass
    params: GrowthParams
    domain: EffectiveDomain = field(default_factory=EffectiveDomain)
    catalogue_tag: Optional[str] = None
    radial_profile: Optional[Callable[[float, np.ndarray], np.ndarray]] = None

    def eval(self, t: float, q):
        points, scalar = as_points(q, self.dimension)
        values = np.asarray(self.func(float(t), points), dtype=float)
        return _shape_back(values, scalar)

    __call__ = eval

    @property
    def is_radial(self) -> bool:
        return self.radial_profile is not None


@dataclass(frozen=True)
class Generator:
    """
    Генератор g(t, z) = sup_q (z·q − f(t, q)), всегда конечный.

    selector возвращает для массива z формы (n, d) выбранные элементы
    ∂g с минимальной нормой, subdifferential описывает множество в одной точке.
    """
    func: PointMap
    dimension: int
    hbar: OffsetMap
    growth_class: GeneratorClass
    params: GrowthParams
    k: float
    h: OffsetMap
    subdifferential_func: Callable[[float, np.ndarray], Subdifferential]
    selector_func: PointMap
    catalogue_tag: Optional[str] = None
    printed: str = ""
    printed_func: Optional[PointMap] = None
    note: str = ""
    known_discrepancy: Optional[Tuple[float, float]] = None

    def eval(self, t: float, z):
        points, scalar = as_points(z, self.dimension)
        values = np.asarray(self.func(float(t), points), dtype=float)
        return _shape_back(values, scalar)

    __call__ = eval

    def subdifferential(self, t: float, z) -> Subdifferential:
        point = np.atleast_1d(np.asarray(z, dtype=float)).reshape(self.dimension)
        return self.subdifferential_func(float(t), point)

    def selector(self, t: float, z) -> np.ndarray:
        """Элементы ∂g(t, z) с минимальной нормой, форма (n, d)."""
        points, _ = as_points(z, self.dimension)
        return np.asarray(self.selector_func(float(t), points), dtype=float).reshape(points.shape)
