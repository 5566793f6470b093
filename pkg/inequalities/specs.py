"""
Описания неравенств, их параметров и областей выборки
"""
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from utils.errors import ParamError


class ConstantSource(Enum):
    """Происхождение константы в правой части"""
    EXPLICIT = "explicit"
    PROOF_DERIVED = "proof-derived"
    THRESHOLD_SEARCH = "threshold-search"


@dataclass(frozen=True)
class SampleDomain:
    """
    Область выборки (x, y): логравномерно на [low, high] с долей нулей.

    x_signed: x со случайным знаком; y_positive: y строго положителен.
    Для стохастических проверок controls задаёт семейство управлений.
    """
    low: float = 1e-6
    high: float = 1e3
    zero_share: float = 0.01
    x_signed: bool = False
    y_positive: bool = False
    controls: Tuple[float, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class InequalityMeta:
    kind: str
    parameters: Tuple[str, ...]
    source: ConstantSource
    domain: SampleDomain = field(default_factory=SampleDomain)
    description: str = ""


STOCHASTIC_DOMAIN = SampleDomain(controls=(0.0, 1.0, 2.0))

REGISTRY: Dict[str, InequalityMeta] = {
    "young_integral": InequalityMeta(
        "pointwise", ("mu",), ConstantSource.EXPLICIT,
        description="xy ≤ ∫f + ∫f⁻¹ ≤ xf(x) + yf⁻¹(y), f(x) = e^{x/μ} - 1"),
    "young_exp_power": InequalityMeta(
        "pointwise", ("mu", "delta"), ConstantSource.EXPLICIT,
        description="xy ≤ x·exp(x^δ/μ^δ) + μy(ln(1+y))^{1/δ}"),
    "young_exp_log": InequalityMeta(
        "pointwise", ("mu", "delta"), ConstantSource.EXPLICIT,
        description="xy ≤ x·exp((ln(1+x))^δ/μ^δ) + y·exp(μ(ln(1+y))^{1/δ})"),
    "young_exp_power_eps": InequalityMeta(
        "pointwise", ("mu", "delta", "q", "eps"), ConstantSource.THRESHOLD_SEARCH,
        description="xy ≤ ε·exp(qx^δ/μ^δ) + μy(ln(1+y))^{1/δ} + C"),
    "young_exp_log_eps": InequalityMeta(
        "pointwise", ("mu", "delta", "q", "eps"), ConstantSource.THRESHOLD_SEARCH,
        description="xy ≤ ε·exp(q(ln(1+x))^δ/μ^δ) + y·exp(μ(ln(1+y))^{1/δ}) + C, δ > 1"),
    "young_exp_linear": InequalityMeta(
        "pointwise", ("mu",), ConstantSource.EXPLICIT,
        description="xy ≤ μ·exp(x/μ) + μy·ln(1+y)"),
    "young_exp_gauss": InequalityMeta(
        "pointwise", ("mu", "q"), ConstantSource.PROOF_DERIVED,
        description="y·e^x ≤ C̄·exp(qx²/μ²) + y·exp(μ√ln(1+y))"),
    "young_power": InequalityMeta(
        "pointwise", ("mu", "delta"), ConstantSource.EXPLICIT,
        description="xy ≤ μx^δ + μ^{-1/(δ-1)}y^{δ*}, δ > 1"),
    "fenchel_exp": InequalityMeta(
        "pointwise", (), ConstantSource.EXPLICIT,
        SampleDomain(x_signed=True, y_positive=True),
        description="xy ≤ e^x + y(ln y - 1), x ∈ ℝ, y > 0"),
    "exp_gauss_reference": InequalityMeta(
        "pointwise", ("mu",), ConstantSource.EXPLICIT, SampleDomain(x_signed=True),
        description="y·e^x ≤ exp(x²/μ²) + e^{μ²}·y·exp(μ√ln(1+y)), x ∈ ℝ"),
    "young_classic": InequalityMeta(
        "pointwise", ("delta",), ConstantSource.EXPLICIT,
        description="xy ≤ x^δ/δ + y^{δ*}/δ*"),
    "density_entropy": InequalityMeta(
        "stochastic", ("horizon",), ConstantSource.EXPLICIT, STOCHASTIC_DOMAIN,
        description="E[L ln(1+L)] ≤ ½E[∫L|q|²dt] + ln 2"),
    "density_log_power": InequalityMeta(
        "stochastic", ("alpha_star", "horizon"), ConstantSource.PROOF_DERIVED, STOCHASTIC_DOMAIN,
        description="E[L(ln(1+L))^{α*/2}] ≤ ((α*/4)E[∫L|q|^{α*}dt] + e)·exp(α*(α*-2)T/8)"),
    "density_exp_log": InequalityMeta(
        "stochastic", ("mu", "eps", "gamma", "lam", "horizon"), ConstantSource.PROOF_DERIVED,
        STOCHASTIC_DOMAIN,
        description="E[L·exp(μ(ln(1+L))^{1/(1+2λ)})] ≤ εE[∫L·exp(2γ^{-1/λ}|q|^{1/λ})dt] + C̃"),
}

POINTWISE_IDS = tuple(k for k, v in REGISTRY.items() if v.kind == "pointwise")
STOCHASTIC_IDS = tuple(k for k, v in REGISTRY.items() if v.kind == "stochastic")

DEFAULTS = {"mu": 1.0, "delta": 2.0, "q": 2.0, "eps": 0.1, "alpha_star": 4.0,
            "gamma": 1.0, "lam": 1.0, "horizon": 1.0}

# (нижняя, верхняя, логравномерно)
DRAW_RANGES = {
    "mu": (0.25, 4.0, True),
    "delta": (0.25, 4.0, False),
    "q": (1.1, 4.0, False),
    "eps": (1e-3, 1.0, True),
}
# δ > 1; для young_exp_log_eps снизу 1.5, иначе порог уходит за предел поиска
DELTA_ABOVE_ONE = {"young_exp_log_eps": (1.5, 4.0), "young_power": (1.0, 4.0),
                   "young_classic": (1.0, 4.0)}


@dataclass(frozen=True)
class InequalitySpec:
    """Конкретное неравенство с набором параметров"""
    ident: str
    parameters: Dict[str, float]
    constant_source: ConstantSource
    sample_domain: SampleDomain
    kind: str = "pointwise"

    def param(self, name: str) -> float:
        return float(self.parameters[name])

    def to_dict(self) -> Dict[str, Any]:
        return {"ident": self.ident, "parameters": dict(self.parameters),
                "constant_source": self.constant_source.value,
                "sample_domain": self.sample_domain.to_dict(), "kind": self.kind}

    def describe_params(self) -> str:
        return ";".join(f"{k}={format(v, '.17g')}" for k, v in sorted(self.parameters.items()))


def _validate(ident: str, params: Dict[str, float]) -> None:
    def fail(message: str):
        raise ParamError(f"{ident}: {message}", module="inequalities")

    for name in ("mu", "eps", "gamma", "lam", "horizon"):
        if name in params and not params[name] > 0:
            fail(f"{name} должно быть > 0, получено {params[name]}")
    if "delta" in params and not params["delta"] > 0:
        fail(f"δ должно быть > 0, получено {params['delta']}")
    if ident in DELTA_ABOVE_ONE and not params["delta"] > 1:
        fail(f"требуется δ > 1, получено {params['delta']}")
    if "q" in params and not params["q"] > 1:
        fail(f"требуется q > 1, получено {params['q']}")
    if "alpha_star" in params and not params["alpha_star"] >= 2:
        fail(f"требуется α* ≥ 2, получено {params['alpha_star']}")


def make_spec(ident: str, params: Optional[Dict[str, float]] = None,
              domain: Optional[SampleDomain] = None) -> InequalitySpec:
    """
    Спецификация с параметрами по умолчанию для незаданных значений.

    Raises:
        ParamError: неизвестное неравенство или недопустимые параметры.
    """
    meta = REGISTRY.get(ident)
    if meta is None:
        raise ParamError(f"неизвестное неравенство '{ident}'", module="inequalities")
    params = dict(params or {})
    unknown = set(params) - set(meta.parameters)
    if unknown:
        raise ParamError(f"{ident}: лишние параметры {sorted(unknown)}", module="inequalities")
    values = {name: float(params.get(name, DEFAULTS[name])) for name in meta.parameters}
    _validate(ident, values)
    return InequalitySpec(ident=ident, parameters=values, constant_source=meta.source,
                          sample_domain=domain or meta.domain, kind=meta.kind)


def draw_parameters(ident: str, count: int = 10, seed: int = 0) -> List[InequalitySpec]:
    """Независимые наборы параметров из рабочих диапазонов."""
    meta = REGISTRY.get(ident)
    if meta is None:
        raise ParamError(f"неизвестное неравенство '{ident}'", module="inequalities")
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(count):
        params = {}
        for name in meta.parameters:
            if name == "delta" and ident in DELTA_ABOVE_ONE:
                lo, hi = DELTA_ABOVE_ONE[ident]
                value = rng.uniform(lo, hi)
                params[name] = value if value > 1.0 else np.nextafter(1.0, 2.0)
            elif name in DRAW_RANGES:
                lo, hi, log = DRAW_RANGES[name]
                params[name] = float(np.exp(rng.uniform(np.log(lo), np.log(hi))) if log
                                     else rng.uniform(lo, hi))
            else:
                params[name] = DEFAULTS[name]
        specs.append(make_spec(ident, params))
    return specs


def sample_points(spec: InequalitySpec, count: int, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Точки (x, y) для поточечной проверки."""
    domain = spec.sample_domain
    rng = np.random.default_rng(seed)
    lo, hi = np.log(domain.low), np.log(domain.high)
    x = np.exp(rng.uniform(lo, hi, count))
    y = np.exp(rng.uniform(lo, hi, count))
    zeros = int(domain.zero_share * count)
    if zeros:
        x[rng.choice(count, zeros, replace=False)] = 0.0
        if not domain.y_positive:
            y[rng.choice(count, zeros, replace=False)] = 0.0
    if domain.x_signed:
        x *= rng.choice((-1.0, 1.0), count)
    return x, y
