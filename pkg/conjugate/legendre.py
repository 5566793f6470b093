"""
Численное преобразование Лежандра–Фенхеля через нижнюю выпуклую оболочку
"""
import threading
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from conjugate.tabulated import TabulatedConvexFunction, check_grid
from model.functions import (
    CoreClass, CoreFunction, Generator, GeneratorClass, Subdifferential, INF, as_points,
)
from utils.errors import ClassError, DomainError
from utils.logger import setup_logger

logger = setup_logger(__name__)


class ConvexHull1D:
    """
    Нижняя выпуклая оболочка конечных точек (x_j, y_j).

    sup_j (z·x_j − y_j) достигается в вершине оболочки, поэтому значение
    сопряженной находится бинарным поиском по наклонам ребер.
    """

    def __init__(self, x: np.ndarray, y: np.ndarray, natural_left: bool = False):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        finite = np.isfinite(y)
        if not finite.any():
            raise DomainError("эффективная область пуста: нет конечных значений")
        xs, ys = x[finite], y[finite]

        hull: List[int] = []
        for j in range(xs.size):
            while len(hull) >= 2:
                a, b = hull[-2], hull[-1]
                # b лежит не ниже хорды (a, j)
                cross = (xs[b] - xs[a]) * (ys[j] - ys[a]) - (ys[b] - ys[a]) * (xs[j] - xs[a])
                if cross <= 0.0:
                    hull.pop()
                else:
                    break
            hull.append(j)

        self.source_x = xs
        self.source_y = ys
        self.x = xs[hull]
        self.y = ys[hull]
        self.slopes = np.diff(self.y) / np.diff(self.x) if self.x.size > 1 else np.empty(0)
        self.open_left = bool(finite[0]) and not natural_left
        self.open_right = bool(finite[-1])

    def values_at_sources(self) -> np.ndarray:
        """Значения оболочки в исходных конечных точках."""
        return np.interp(self.source_x, self.x, self.y)

    def repair_deviation(self) -> float:
        return float(np.max(self.source_y - self.values_at_sources()))

    def conjugate(self, z) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        Значения sup_j (z·x_j − y_j).

        Returns:
            Tuple: значения, наименьший и наибольший аргмаксимум, признак
            того, что аргмаксимум лежит на конце сетки с конечным значением.
        """
        z = np.asarray(z, dtype=float)
        lo = np.searchsorted(self.slopes, z, side='left')
        hi = np.searchsorted(self.slopes, z, side='right')
        values = z * self.x[lo] - self.y[lo]
        last = self.x.size - 1
        at_edge = (self.open_left & (hi == 0)) | (self.open_right & (lo == last))
        return values, self.x[lo], self.x[hi], at_edge


def legendre_transform(src: TabulatedConvexFunction, z_grid) -> TabulatedConvexFunction:
    """
    Сопряженная по Лежандру–Фенхелю на сетке z.

    Для радиальной функции профиль φ(r), r ≥ 0, преобразуется одномерно:
    g(z) = sup_r (|z|·r − φ(r)).

    Args:
        src (TabulatedConvexFunction): Табулированная f.
        z_grid: Строго возрастающая сетка.

    Returns:
        TabulatedConvexFunction: g на z_grid с маской экстраполяции и аргмаксимумами.
    """
    z_grid = check_grid(z_grid)
    hull = ConvexHull1D(src.grid, src.values, natural_left=src.radial)
    deviation = hull.repair_deviation()
    if deviation > src.tolerance:
        logger.warning(f"Табличная функция невыпукла: ремонт оболочкой сдвигает значения на {deviation:.3g}")

    radial_out = src.radial and bool(np.all(z_grid >= 0.0))
    arg = np.abs(z_grid) if src.radial else z_grid
    values, lo, _, at_edge = hull.conjugate(arg)
    if at_edge.any():
        logger.warning(f"Аргмаксимум на краю сетки q в {int(at_edge.sum())} точках: расширьте сетку q")

    argmax = lo * np.sign(z_grid) if src.radial else lo
    return TabulatedConvexFunction(
        grid=z_grid, values=values, radial=radial_out,
        extrapolated=at_edge, argmax=argmax, tolerance=src.tolerance,
    )


@dataclass
class BiconjugateReport:
    """Отклонение f** от f на внутренних точках области"""
    max_deviation: float
    location: Optional[float]
    tolerance: float
    points: int
    excluded: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def tabulate_core(core: CoreFunction, q_grid, t: float = 0.0) -> TabulatedConvexFunction:
    """Табуляция f на сетке; радиальные функции при d > 1 профилем на r ≥ 0."""
    q_grid = check_grid(q_grid)
    if core.dimension == 1:
        values = np.asarray(core.func(t, q_grid.reshape(-1, 1)), dtype=float)
        return TabulatedConvexFunction(grid=q_grid, values=values)
    if not core.is_radial:
        raise DomainError("при d > 1 поддерживаются только радиальные функции")
    r = q_grid[q_grid >= 0.0]
    values = np.asarray(core.radial_profile(t, r), dtype=float)
    return TabulatedConvexFunction(grid=r, values=values, radial=True)


def biconjugate_check(core: CoreFunction, q_grid, z_grid, tol: Optional[float] = None,
                      t: float = 0.0) -> BiconjugateReport:
    """
    Проверка f** = f на внутренних точках конечной области.

    Точки, где аргмаксимум второго преобразования упирается в край сетки z,
    исключаются: там сетка z слишком узка для наклона f.
    """
    f_tab = tabulate_core(core, q_grid, t)
    z_grid = check_grid(z_grid)
    g_tab = legendre_transform(f_tab, z_grid if not f_tab.radial else z_grid[z_grid >= 0.0])
    f_star = legendre_transform(g_tab, f_tab.grid)

    finite = np.isfinite(f_tab.values)
    interior = finite.copy()
    interior[0] = interior[-1] = False
    interior[1:-1] &= finite[:-2] & finite[2:]
    usable = interior & ~f_star.extrapolated

    dq = float(np.max(np.diff(f_tab.grid)))
    dz = float(np.max(np.diff(z_grid)))
    tolerance = tol if tol is not None else 2.0 * max(dq, dz)

    if not usable.any():
        return BiconjugateReport(0.0, None, tolerance, 0, int(interior.sum()))
    deviation = np.abs(f_star.values - f_tab.values)
    deviation = np.where(usable, deviation, -INF)
    worst = int(np.argmax(deviation))
    return BiconjugateReport(
        max_deviation=float(deviation[worst]),
        location=float(f_tab.grid[worst]),
        tolerance=float(tolerance),
        points=int(usable.sum()),
        excluded=int((interior & ~usable).sum()),
    )


def fenchel_young_gap(core: CoreFunction, gen: Generator, t: float, q, z):
    """
    Зазор Фенхеля–Юнга f(t,q) + g(t,z) − z·q.

    Неотрицателен и равен нулю ровно при q ∈ ∂g(t,z); вне области f равен +∞.
    """
    q_pts, scalar = as_points(q, core.dimension)
    z_pts, _ = as_points(z, gen.dimension)
    f_val = np.asarray(core.func(float(t), q_pts), dtype=float)
    g_val = np.asarray(gen.func(float(t), z_pts), dtype=float)
    with np.errstate(invalid="ignore"):
        gap = np.where(np.isfinite(f_val), f_val + g_val - np.sum(z_pts * q_pts, axis=1), INF)
    return float(gap[0]) if scalar else gap


_CLASS_MAP = {
    CoreClass.A1: GeneratorClass.H1,
    CoreClass.A2: GeneratorClass.H2,
    CoreClass.A3: GeneratorClass.H3,
    CoreClass.A4: GeneratorClass.H4,
}


def numeric_generator(core: CoreFunction, q_grid, time_dependent: bool = True) -> Generator:
    """
    Генератор, полученный численным сопряжением f.

    g(t,z) = max_j (z·q_j − f(t,q_j)) по вершинам оболочки; субградиенты:
    аргмаксимумы. Оболочки кэшируются по моменту времени.

    Args:
        core (CoreFunction): Функция штрафа с объявленным классом.
        q_grid: Сетка q (при d > 1 используется ее неотрицательная часть как сетка r).
        time_dependent (bool): False: одна оболочка при t = 0 для всех моментов.
    """
    from model.growth import compute_hbar

    if core.growth_class == CoreClass.UNCLASSIFIED:
        raise ClassError("численный генератор требует объявленного класса роста")
    q_grid = check_grid(q_grid)
    cache: Dict[float, ConvexHull1D] = {}
    lock = threading.Lock()

    def hull_at(t: float) -> ConvexHull1D:
        key = float(t) if time_dependent else 0.0
        with lock:
            if key not in cache:
                table = tabulate_core(core, q_grid, key)
                cache[key] = ConvexHull1D(table.grid, table.values, natural_left=table.radial)
            return cache[key]

    radial = core.dimension > 1

    def func(t, z):
        arg = np.linalg.norm(z, axis=1) if radial else z[:, 0]
        return hull_at(t).conjugate(arg)[0]

    def selector(t, z):
        if radial:
            r = np.linalg.norm(z, axis=1)
            _, lo, _, _ = hull_at(t).conjugate(r)
            safe = np.where(r > 0.0, r, 1.0)
            return (lo / safe)[:, None] * z
        _, lo, hi, _ = hull_at(t).conjugate(z[:, 0])
        return np.clip(0.0, lo, hi)[:, None]

    def subdiff(t, z):
        if radial:
            r = float(np.linalg.norm(z))
            _, lo, hi, _ = hull_at(t).conjugate(np.array([r]))
            if r == 0.0:
                return Subdifferential.ball(np.zeros_like(z), float(hi[0]))
            return Subdifferential.point(float(lo[0]) * z / r)
        _, lo, hi, _ = hull_at(t).conjugate(np.array([z[0]]))
        return Subdifferential.interval(float(lo[0]), float(hi[0]))

    return Generator(
        func=func, dimension=core.dimension, hbar=compute_hbar(core),
        growth_class=_CLASS_MAP[core.growth_class], params=core.params, k=core.k, h=core.h,
        subdifferential_func=subdiff, selector_func=selector,
        catalogue_tag=core.catalogue_tag, printed="численное сопряжение",
    )


@dataclass
class ConjugationRow:
    """Сравнение численной и замкнутой формулы g для одного примера"""
    tag: str
    compared: int
    max_deviation: float
    worst_z: float
    mismatches: int
    documented_mismatches: int
    discrepancy_lo: Optional[float]
    discrepancy_hi: Optional[float]
    extrapolated: int
    biconjugate_deviation: float
    biconjugate_tolerance: float

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and self.biconjugate_deviation <= self.biconjugate_tolerance

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def conjugation_report(tags: Iterable[str], q_box: float = 12.0, q_points: int = 4801,
                       z_box: float = 5.0, z_points: int = 401) -> List[ConjugationRow]:
    """
    Численное сопряжение каждой f каталога против хранимой замкнутой g.

    Допуск в точке z: 3·Δq·max(1, |наклон g|). Решаемая g должна совпадать
    с численной всюду; печатная формула (printed_func) может расходиться
    с ней только внутри задокументированной области.
    """
    from model.catalogue import build_catalogue_entry

    q_grid = np.linspace(-q_box, q_box, int(q_points))
    z_grid = np.linspace(-z_box, z_box, int(z_points))
    interior = z_grid[1:-1]
    dq = float(q_grid[1] - q_grid[0])
    rows: List[ConjugationRow] = []

    for tag in tags:
        core, gen = build_catalogue_entry(tag)
        numeric = legendre_transform(tabulate_core(core, q_grid), interior)
        closed = np.asarray(gen.func(0.0, interior.reshape(-1, 1)), dtype=float)
        slope = np.abs(gen.selector(0.0, interior)[:, 0])
        tolerance = 3.0 * dq * np.maximum(1.0, slope)

        usable = ~numeric.extrapolated
        deviation = np.where(usable, np.abs(numeric.values - closed), 0.0)
        bad = deviation > tolerance

        # Печатная формула может расходиться только в задокументированной области
        printed_bad = np.zeros_like(bad)
        documented = np.zeros_like(bad)
        if gen.printed_func is not None:
            printed = np.asarray(gen.printed_func(0.0, interior.reshape(-1, 1)), dtype=float)
            printed_bad = usable & (np.abs(numeric.values - printed) > tolerance)
            if gen.known_discrepancy is not None:
                lo, hi = gen.known_discrepancy
                documented = printed_bad & (interior > lo) & (interior < hi)
        undocumented = bad | (printed_bad & ~documented)
        spread = bad | printed_bad

        bi = biconjugate_check(core, np.linspace(-z_box, z_box, int(z_points)), q_grid)
        worst = int(np.argmax(deviation))
        row = ConjugationRow(
            tag=tag,
            compared=int(usable.sum()),
            max_deviation=float(deviation[worst]),
            worst_z=float(interior[worst]),
            mismatches=int(undocumented.sum()),
            documented_mismatches=int(documented.sum()),
            discrepancy_lo=float(interior[spread].min()) if spread.any() else None,
            discrepancy_hi=float(interior[spread].max()) if spread.any() else None,
            extrapolated=int((~usable).sum()),
            biconjugate_deviation=bi.max_deviation,
            biconjugate_tolerance=bi.tolerance,
        )
        if row.documented_mismatches:
            logger.warning(f"Пример {tag}: печатная формула g расходится с численной на "
                           f"[{row.discrepancy_lo:.3g}, {row.discrepancy_hi:.3g}] ({gen.note})")
        rows.append(row)
    return rows
