"""
Каталог пар (f, g) с замкнутыми формулами сопряжения
"""
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy.special import xlogy

from model.functions import (
    CoreClass, CoreFunction, EffectiveDomain, Generator, GeneratorClass,
    OffsetMap, Subdifferential, as_offset, INF,
)
from model.growth import GrowthParams, compute_hbar
from utils.errors import CatalogueError, ParamError
from utils.logger import setup_logger

logger = setup_logger(__name__)

CATALOGUE_TAGS = (
    "linear_dirac",
    "drift_band",
    "entropic",
    "capped_quadratic",
    "exponential",
    "quartic",
    "piecewise_vii",
)


def _norm(points: np.ndarray) -> np.ndarray:
    return np.linalg.norm(points, axis=1)


def _direction(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Нормы и единичные направления; в нуле направление нулевое."""
    r = _norm(points)
    safe = np.where(r > 0.0, r, 1.0)
    return r, points / safe[:, None] * (r > 0.0)[:, None]


def _radial_subdiff(slope: Callable[[float], float]) -> Callable[[float, np.ndarray], Subdifferential]:
    def subdiff(t: float, z: np.ndarray) -> Subdifferential:
        r = float(np.linalg.norm(z))
        if r == 0.0:
            return Subdifferential.point(np.zeros_like(z))
        return Subdifferential.point(slope(r) * z / r)
    return subdiff


def _radial_selector(slope: Callable[[np.ndarray], np.ndarray]) -> Callable[[float, np.ndarray], np.ndarray]:
    def selector(t: float, z: np.ndarray) -> np.ndarray:
        r, u = _direction(z)
        return slope(r)[:, None] * u
    return selector


def _linear_dirac(params: GrowthParams, h: OffsetMap, qbar) -> Tuple[CoreFunction, Generator]:
    d = params.dimension
    anchor = np.zeros(d) if qbar is None else np.atleast_1d(np.asarray(qbar, dtype=float)).reshape(d)
    norm = float(np.linalg.norm(anchor))
    if norm > params.gamma:
        raise ParamError(f"|q̄| = {norm} превышает γ = {params.gamma}")
    k = max(params.k, norm)

    def f(t, q):
        hit = np.all(np.abs(q - anchor) <= 1e-12, axis=1)
        return np.where(hit, h(t), INF)

    def g(t, z):
        return z @ anchor - h(t)

    core = CoreFunction(
        func=f, dimension=d, h=h, anchor_qbar=lambda t: anchor.copy(), k=k,
        growth_class=CoreClass.A4, params=params,
        domain=EffectiveDomain(kind="point", center=float(anchor[0])),
        catalogue_tag="linear_dirac",
    )
    gen = Generator(
        func=g, dimension=d, hbar=compute_hbar(core), growth_class=GeneratorClass.H4,
        params=params, k=k, h=h,
        subdifferential_func=lambda t, z: Subdifferential.point(anchor),
        selector_func=lambda t, z: np.broadcast_to(anchor, z.shape).copy(),
        catalogue_tag="linear_dirac", printed="q̄·z − h",
    )
    return core, gen


def _drift_band(params: GrowthParams, h: OffsetMap, qbar) -> Tuple[CoreFunction, Generator]:
    d, gamma = params.dimension, params.gamma

    def f(t, q):
        return np.where(_norm(q) <= gamma * (1.0 + 1e-12), 0.0, INF)

    def subdiff(t, z):
        r = float(np.linalg.norm(z))
        if r == 0.0:
            return Subdifferential.ball(np.zeros_like(z), gamma)
        return Subdifferential.point(gamma * z / r)

    core = CoreFunction(
        func=f, dimension=d, h=h, anchor_qbar=lambda t: np.zeros(d), k=params.k,
        growth_class=CoreClass.A4, params=params,
        domain=EffectiveDomain(kind="ball", center=0.0, radius=gamma),
        catalogue_tag="drift_band",
        radial_profile=lambda t, r: np.where(r <= gamma * (1.0 + 1e-12), 0.0, INF),
    )
    gen = Generator(
        func=lambda t, z: gamma * _norm(z), dimension=d, hbar=compute_hbar(core),
        growth_class=GeneratorClass.H4, params=params, k=params.k, h=h,
        subdifferential_func=subdiff,
        selector_func=_radial_selector(lambda r: np.full_like(r, gamma)),
        catalogue_tag="drift_band", printed="γ|z|",
    )
    return core, gen


def _entropic(params: GrowthParams, h: OffsetMap, qbar) -> Tuple[CoreFunction, Generator]:
    d, gamma = params.dimension, params.gamma
    core = CoreFunction(
        func=lambda t, q: _norm(q) ** 2 / (2.0 * gamma), dimension=d, h=h,
        anchor_qbar=lambda t: np.zeros(d), k=params.k, growth_class=CoreClass.A1,
        params=params, catalogue_tag="entropic",
        radial_profile=lambda t, r: r ** 2 / (2.0 * gamma),
    )
    gen = Generator(
        func=lambda t, z: 0.5 * gamma * _norm(z) ** 2, dimension=d, hbar=compute_hbar(core),
        growth_class=GeneratorClass.H1, params=params, k=params.k, h=h,
        subdifferential_func=lambda t, z: Subdifferential.point(gamma * z),
        selector_func=lambda t, z: gamma * z,
        catalogue_tag="entropic", printed="γ|z|²/2",
    )
    return core, gen


def _capped_quadratic(params: GrowthParams, h: OffsetMap, qbar) -> Tuple[CoreFunction, Generator]:
    d, gamma = params.dimension, params.gamma

    def profile(r):
        return np.where(r <= gamma * (1.0 + 1e-12), 0.5 * r ** 2, INF)

    def g(t, z):
        r = _norm(z)
        return np.where(r <= gamma, 0.5 * r ** 2, gamma * r - 0.5 * gamma ** 2)

    core = CoreFunction(
        func=lambda t, q: profile(_norm(q)), dimension=d, h=h,
        anchor_qbar=lambda t: np.zeros(d), k=params.k, growth_class=CoreClass.A4,
        params=params, domain=EffectiveDomain(kind="ball", center=0.0, radius=gamma),
        catalogue_tag="capped_quadratic", radial_profile=lambda t, r: profile(r),
    )
    gen = Generator(
        func=g, dimension=d, hbar=compute_hbar(core), growth_class=GeneratorClass.H4,
        params=params, k=params.k, h=h,
        subdifferential_func=_radial_subdiff(lambda r: min(r, gamma)),
        selector_func=_radial_selector(lambda r: np.minimum(r, gamma)),
        catalogue_tag="capped_quadratic", printed="|z|²/2 при |z| ≤ γ, γ|z| − γ²/2 иначе",
    )
    return core, gen


def _exponential(params: GrowthParams, h: OffsetMap, qbar) -> Tuple[CoreFunction, Generator]:
    params = params.with_overrides(c=1.0, gamma=2.0, lam=1.0)
    d = params.dimension
    anchor_h = lambda t: float(h(t)) + 1.0  # noqa: E731  f(0) = 1 + h

    def printed(t, z):
        r = _norm(z)
        return xlogy(r, r) - r - h(t)

    def conjugate(t, z):
        r = _norm(z)
        return np.where(r >= 1.0, xlogy(r, r) - r, -1.0) - h(t)

    core = CoreFunction(
        func=lambda t, q: np.exp(_norm(q)) + h(t), dimension=d, h=anchor_h,
        anchor_qbar=lambda t: np.zeros(d), k=params.k, growth_class=CoreClass.A3,
        params=params, catalogue_tag="exponential",
        radial_profile=lambda t, r: np.exp(r) + h(t),
    )
    gen = Generator(
        func=conjugate, dimension=d, hbar=compute_hbar(core), growth_class=GeneratorClass.H3,
        params=params, k=params.k, h=anchor_h,
        subdifferential_func=_radial_subdiff(lambda r: max(np.log(r), 0.0) if r > 0 else 0.0),
        selector_func=_radial_selector(lambda r: np.log(np.maximum(r, 1.0))),
        catalogue_tag="exponential", printed="|z|(ln|z| − 1) − h", printed_func=printed,
        note=("формула |z|(ln|z| − 1) − h верна только при |z| ≥ 1; при |z| < 1 "
              "сопряженная равна −1 − h; решается сопряженная, формула хранится в printed_func"),
        known_discrepancy=(-1.0, 1.0),
    )
    return core, gen


def _quartic(params: GrowthParams, h: OffsetMap, qbar) -> Tuple[CoreFunction, Generator]:
    params = params.with_overrides(alpha=4.0 / 3.0, alpha_star=4.0, gamma=4.0 ** (1.0 / 3.0))
    d = params.dimension
    core = CoreFunction(
        func=lambda t, q: 0.25 * _norm(q) ** 4 + h(t), dimension=d, h=h,
        anchor_qbar=lambda t: np.zeros(d), k=params.k, growth_class=CoreClass.A2,
        params=params, catalogue_tag="quartic",
        radial_profile=lambda t, r: 0.25 * r ** 4 + h(t),
    )
    gen = Generator(
        func=lambda t, z: 0.75 * _norm(z) ** (4.0 / 3.0) - h(t), dimension=d,
        hbar=compute_hbar(core), growth_class=GeneratorClass.H2, params=params,
        k=params.k, h=h,
        subdifferential_func=_radial_subdiff(lambda r: r ** (1.0 / 3.0)),
        selector_func=_radial_selector(np.cbrt),
        catalogue_tag="quartic", printed="¾|z|^{4/3} − h",
    )
    return core, gen


def _piecewise_vii(params: GrowthParams, h: OffsetMap, qbar) -> Tuple[CoreFunction, Generator]:
    if params.dimension != 1:
        raise ParamError("пример piecewise_vii определен только при d = 1")
    params = params.with_overrides(gamma=2.0, k=max(params.k, 1.0))

    def f(t, q):
        x = q[:, 0]
        return np.where(x < 1.0, INF, np.where(x <= 2.0, x - 1.0, 0.25 * x ** 2))

    def g(t, z):
        x = z[:, 0]
        return np.where(x < 1.0, x, x ** 2)

    def subdiff(t, z):
        x = float(z[0])
        if x < 1.0:
            return Subdifferential.point(1.0)
        if x == 1.0:
            return Subdifferential.interval(1.0, 2.0)
        return Subdifferential.point(2.0 * x)

    def selector(t, z):
        x = z[:, 0]
        return np.where(x <= 1.0, 1.0, 2.0 * x)[:, None]

    core = CoreFunction(
        func=f, dimension=1, h=h, anchor_qbar=lambda t: np.array([1.0]), k=params.k,
        growth_class=CoreClass.A1, params=params,
        domain=EffectiveDomain(kind="interval", lower=1.0, upper=INF),
        catalogue_tag="piecewise_vii",
    )
    gen = Generator(
        func=g, dimension=1, hbar=compute_hbar(core), growth_class=GeneratorClass.H1,
        params=params, k=params.k, h=h, subdifferential_func=subdiff, selector_func=selector,
        catalogue_tag="piecewise_vii", printed="z при z < 1, z² при z ≥ 1",
    )
    return core, gen


_BUILDERS: Dict[str, Callable] = {
    "linear_dirac": _linear_dirac,
    "drift_band": _drift_band,
    "entropic": _entropic,
    "capped_quadratic": _capped_quadratic,
    "exponential": _exponential,
    "quartic": _quartic,
    "piecewise_vii": _piecewise_vii,
}


def build_catalogue_entry(tag: str, params: Optional[GrowthParams] = None,
                          h: Union[float, OffsetMap, None] = None,
                          qbar=None) -> Tuple[CoreFunction, Generator]:
    """
    Пара (f, g) из каталога примеров с объявленными классами роста.

    Для примеров, где h ≡ 0 в формуле f, переданное h используется только
    как смещение условия (A0); формула f не меняется.

    Args:
        tag (str): Тег каталога.
        params (GrowthParams): Константы роста; у exponential, quartic и
            piecewise_vii константы класса фиксированы самим примером.
        h (float | Callable): Смещение h(t) ≥ 0.
        qbar: Якорь q̄ для linear_dirac.

    Returns:
        Tuple[CoreFunction, Generator]: Функция штрафа и генератор.
    """
    if tag not in _BUILDERS:
        raise CatalogueError(f"неизвестный тег каталога '{tag}'")
    params = params or GrowthParams()
    offset = as_offset(h)
    if float(offset(0.0)) < 0:
        raise ParamError(f"смещение h должно быть неотрицательным, h(0) = {offset(0.0)}")

    core, gen = _BUILDERS[tag](params, offset, qbar)
    logger.debug(f"Построена пара каталога {tag}: {core.growth_class.value}/{gen.growth_class.value}")
    return core, gen
