"""
Параметры роста, смещение h̄ и сеточная сертификация оценок роста
"""
from dataclasses import asdict, dataclass, field, fields, replace
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from utils.errors import ClassError, ParamError
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class GrowthParams:
    """
    Константы условий роста.

    Attributes:
        gamma (float): γ > 0.
        lam (float): λ > 0.
        alpha (float): α ∈ (1, 2).
        alpha_star (float): α* = α/(α−1); вычисляется, если не задан.
        c (float): c > 0.
        k (float): Граница |q̄| ≥ 0.
        dimension (int): Размерность броуновского движения d.
        horizon (float): Горизонт T > 0.
    """
    gamma: float = 1.0
    lam: float = 1.0
    alpha: float = 1.5
    alpha_star: Optional[float] = None
    c: float = 1.0
    k: float = 0.0
    dimension: int = 1
    horizon: float = 1.0

    def __post_init__(self):
        if self.alpha_star is None and 1.0 < self.alpha < 2.0:
            object.__setattr__(self, "alpha_star", self.alpha / (self.alpha - 1.0))
        self.validate()

    def validate(self):
        if not (self.gamma > 0 and self.lam > 0 and self.c > 0):
            raise ParamError(f"γ, λ, c должны быть положительны: γ={self.gamma}, λ={self.lam}, c={self.c}")
        if not (1.0 < self.alpha < 2.0):
            raise ParamError(f"α должно лежать в (1, 2), получено {self.alpha}")
        if abs(1.0 / self.alpha + 1.0 / self.alpha_star - 1.0) > 1e-12:
            raise ParamError(f"1/α + 1/α* ≠ 1 для α={self.alpha}, α*={self.alpha_star}")
        if self.k < 0:
            raise ParamError(f"k должно быть неотрицательным, получено {self.k}")
        if int(self.dimension) < 1:
            raise ParamError(f"размерность должна быть ≥ 1, получено {self.dimension}")
        if not self.horizon > 0:
            raise ParamError(f"горизонт T должен быть положительным, получено {self.horizon}")

    def with_overrides(self, **overrides) -> "GrowthParams":
        """Копия с замененными полями; α* пересчитывается при смене α."""
        unknown = sorted(set(overrides) - {f.name for f in fields(self)})
        if unknown:
            raise ParamError(f"неизвестные параметры роста {unknown}")
        if "alpha" in overrides and "alpha_star" not in overrides:
            overrides["alpha_star"] = None
        return replace(self, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class GrowthFailure:
    """Точка, в которой нарушена заявленная оценка"""
    condition: str
    t: float
    point: List[float]
    value: float
    bound: float
    excess: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class GrowthReport:
    """Отчет сеточной сертификации"""
    subject: str
    growth_class: str
    points_checked: int
    failures: List[GrowthFailure] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.failures

    @property
    def worst_excess(self) -> float:
        return max((f.excess for f in self.failures), default=0.0)

    def conditions(self) -> List[str]:
        return sorted({f.condition for f in self.failures})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "growth_class": self.growth_class,
            "points_checked": self.points_checked,
            "certified": self.certified,
            "worst_excess": self.worst_excess,
            "failures": [f.to_dict() for f in self.failures],
        }


def default_grid(dimension: int = 1, box: float = 10.0, points: int = 2001) -> np.ndarray:
    """Равномерная сетка на [-box, box]; при d > 1 точки на оси и диагонали."""
    axis = np.linspace(-box, box, int(points))
    if dimension == 1:
        return axis
    diagonal = np.outer(axis, np.ones(dimension)) / np.sqrt(dimension)
    first = np.zeros((axis.size, dimension))
    first[:, 0] = axis
    return np.vstack([first, diagonal])


def _norms(points: np.ndarray) -> np.ndarray:
    return np.linalg.norm(points, axis=1)


def _core_lower_bound(core, r: np.ndarray, h: float) -> np.ndarray:
    from model.functions import CoreClass

    p = core.params
    cls = core.growth_class
    if cls == CoreClass.A1:
        return r ** 2 / (2.0 * p.gamma) - h
    if cls == CoreClass.A2:
        return p.gamma ** (-1.0 / (p.alpha - 1.0)) * r ** p.alpha_star - h
    if cls == CoreClass.A3:
        with np.errstate(over="ignore"):
            return p.c * np.exp(2.0 * p.gamma ** (-1.0 / p.lam) * r ** (1.0 / p.lam)) - h
    return np.full_like(r, -h)


def _generator_upper_bound(gen, r: np.ndarray, hbar: float) -> np.ndarray:
    from model.functions import GeneratorClass

    p = gen.params
    cls = gen.growth_class
    if cls == GeneratorClass.H1:
        return hbar + 0.5 * p.gamma * r ** 2
    if cls == GeneratorClass.H2:
        return hbar + p.gamma * r ** p.alpha
    if cls == GeneratorClass.H3:
        return hbar + p.gamma * r * np.log(np.e + r) ** p.lam
    return hbar + p.gamma * r


def _collect(report: GrowthReport, condition: str, t: float, points: np.ndarray,
             values: np.ndarray, bounds: np.ndarray, excess: np.ndarray, tol: float):
    scale = tol * (1.0 + np.abs(np.where(np.isfinite(bounds), bounds, 0.0)))
    bad = np.flatnonzero(excess > scale)
    for i in bad:
        report.failures.append(GrowthFailure(
            condition=condition,
            t=float(t),
            point=points[i].tolist(),
            value=float(values[i]),
            bound=float(bounds[i]),
            excess=float(excess[i]),
        ))


def check_growth(obj, grid: Optional[np.ndarray] = None, tol: float = 1e-9,
                 times: Sequence[float] = (0.0,)) -> GrowthReport:
    """
    Сертификация оценок роста на сетке.

    Для функции штрафа проверяются (A0) и нижняя оценка класса A1–A4,
    для генератора верхняя оценка класса H1–H4 и нижняя оценка
    g(t, z) ≥ −k|z| − h(t). Нарушения попадают в отчет, исключения не бросаются.

    Args:
        obj: CoreFunction или Generator.
        grid (np.ndarray): Точки формы (n,) при d = 1 или (n, d).
        tol (float): Допуск относительно масштаба оценки.
        times (Sequence[float]): Моменты времени.

    Returns:
        GrowthReport: Пустой список нарушений означает сертификацию на сетке.
    """
    from model.functions import CoreClass, CoreFunction, Generator, as_points

    if grid is None:
        grid = default_grid(obj.dimension)
    points, _ = as_points(grid, obj.dimension)
    if points.shape[0] == 0:
        raise ParamError("сетка проверки роста пуста")
    r = _norms(points)

    if isinstance(obj, CoreFunction):
        if obj.growth_class == CoreClass.UNCLASSIFIED:
            raise ClassError("функция штрафа не имеет объявленного класса роста")
        report = GrowthReport("core", obj.growth_class.value, points.shape[0] * len(times))
        for t in times:
            h = float(obj.h(t))
            values = np.asarray(obj.func(t, points), dtype=float)
            bounds = _core_lower_bound(obj, r, h)
            finite = np.isfinite(values)
            excess = np.where(finite, bounds - values, -np.inf)
            _collect(report, obj.growth_class.value, t, points, values, bounds, excess, tol)

            if obj.growth_class == CoreClass.A4:
                outside = r > obj.params.gamma * (1.0 + 1e-12)
                bad = outside & finite
                _collect(report, "A4-domain", t, points, values, np.full_like(r, np.inf),
                         np.where(bad, np.inf, -np.inf), tol)

            qbar = np.atleast_1d(np.asarray(obj.anchor_qbar(t), dtype=float)).reshape(1, -1)
            f_anchor = np.asarray(obj.func(t, qbar), dtype=float)
            anchor_excess = np.array([f_anchor[0] - h]) if np.isfinite(f_anchor[0]) else np.array([np.inf])
            _collect(report, "A0", t, qbar, f_anchor, np.array([h]), anchor_excess, tol)
            norm_excess = np.array([float(np.linalg.norm(qbar)) - obj.k])
            _collect(report, "A0-anchor", t, qbar, np.array([np.linalg.norm(qbar)]),
                     np.array([obj.k]), norm_excess, tol)
    elif isinstance(obj, Generator):
        report = GrowthReport("generator", obj.growth_class.value, points.shape[0] * len(times))
        for t in times:
            hbar = float(obj.hbar(t))
            h = float(obj.h(t))
            values = np.asarray(obj.func(t, points), dtype=float)
            upper = _generator_upper_bound(obj, r, hbar)
            _collect(report, obj.growth_class.value, t, points, values, upper,
                     np.abs(values) - upper, tol)
            lower = -obj.k * r - h
            _collect(report, "lower", t, points, values, lower, lower - values, tol)
    else:
        raise ClassError(f"объект {type(obj).__name__} не является ни ядром, ни генератором")

    if report.failures:
        logger.warning(f"Оценки роста ({report.subject}, {report.growth_class}) нарушены в "
                       f"{len(report.failures)} точках, максимум превышения {report.worst_excess:.3g}")
    return report


@dataclass
class ConvexityReport:
    """Результат выборочной проверки выпуклости"""
    triples: int
    finite_triples: int
    violations: int
    worst_defect: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def sample_convexity(obj, samples: int = 1000, box: float = 5.0, seed: int = 0,
                     tol: float = 1e-9, t: float = 0.0) -> ConvexityReport:
    """
    Проверка неравенства выпуклости на случайных тройках (q1, q2, θ).

    Учитываются только тройки с конечными значениями в концах.
    """
    rng = np.random.default_rng(seed)
    d = obj.dimension
    q1 = rng.uniform(-box, box, size=(samples, d))
    q2 = rng.uniform(-box, box, size=(samples, d))
    theta = rng.uniform(0.0, 1.0, size=(samples, 1))

    f1 = np.asarray(obj.func(t, q1), dtype=float)
    f2 = np.asarray(obj.func(t, q2), dtype=float)
    finite = np.isfinite(f1) & np.isfinite(f2)
    mid = np.asarray(obj.func(t, theta * q1 + (1.0 - theta) * q2), dtype=float)
    chord = theta[:, 0] * f1 + (1.0 - theta[:, 0]) * f2

    with np.errstate(invalid="ignore"):
        defect = np.where(finite, mid - chord, -np.inf)
    bad = defect > tol * (1.0 + np.abs(np.where(finite, chord, 0.0)))
    return ConvexityReport(
        triples=samples,
        finite_triples=int(finite.sum()),
        violations=int(bad.sum()),
        worst_defect=float(defect[finite].max()) if finite.any() else 0.0,
    )


@lru_cache(maxsize=64)
def a3_constant(c: float, gamma: float, lam: float, radius: float = 60.0,
                points: int = 6001, z_radius: float = 50.0, z_points: int = 4001) -> float:
    """
    Численная константа C_{c,γ,λ} для смещения h̄ класса A3.

    Наименьшее C ≥ 0, при котором φ*(s) = sup_{r≥0} (s r − φ(r)) ≤ γ s (ln(1+s))^λ + C
    на рабочей сетке, где φ(r) = c·exp(2γ^{-1/λ} r^{1/λ}); результат удваивается.
    Аргмаксимум r = 0 внутренний: профиль определен только при r ≥ 0.
    """
    from conjugate.legendre import ConvexHull1D

    r = np.linspace(0.0, radius, int(points))
    with np.errstate(over="ignore"):
        profile = c * np.exp(2.0 * gamma ** (-1.0 / lam) * r ** (1.0 / lam))
    hull = ConvexHull1D(r, profile, natural_left=True)
    s = np.linspace(0.0, z_radius, int(z_points))
    conj, _, _, at_edge = hull.conjugate(s)
    inside = ~at_edge
    gap = conj[inside] - gamma * s[inside] * np.log1p(s[inside]) ** lam
    constant = 2.0 * max(0.0, float(gap.max()) if gap.size else 0.0)
    logger.info(f"Константа A3 для (c={c}, γ={gamma}, λ={lam}): {constant:.6g}")
    return constant


def compute_hbar(core, params: Optional[GrowthParams] = None):
    """
    Смещение h̄ генератора по классу роста функции штрафа.

    Args:
        core (CoreFunction): Функция штрафа с объявленным классом.
        params (GrowthParams): Константы; по умолчанию core.params.

    Returns:
        Callable[[float], float]: Отображение t -> h̄(t).
    """
    from model.functions import CoreClass

    p = params or core.params
    h = core.h
    k = float(core.k)
    cls = core.growth_class

    if cls == CoreClass.A1:
        extra = k ** 2 / (2.0 * p.gamma)
    elif cls == CoreClass.A2:
        extra = p.gamma ** (-1.0 / (p.alpha - 1.0)) * k ** p.alpha_star
    elif cls == CoreClass.A3:
        extra = float(np.exp(2.0 * p.gamma ** (-1.0 / p.lam) * k ** (1.0 / p.lam)))
        extra += a3_constant(float(p.c), float(p.gamma), float(p.lam))
    elif cls == CoreClass.A4:
        extra = 0.0
    else:
        raise ClassError("h̄ определено только для классов A1–A4")

    return lambda t: float(h(t)) + extra
