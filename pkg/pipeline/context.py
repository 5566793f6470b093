"""
Контекст запуска сценария, общий для раннера и проверок
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from bsde.solver import BsdeSolution
from conjugate.legendre import numeric_generator
from conjugate.tabulated import core_from_table, load_tabulated_csv
from model.catalogue import build_catalogue_entry
from model.functions import CoreFunction, Generator
from model.growth import GrowthParams
from paths.ensemble import PathEnsemble, forward_sde, generate
from pipeline.expressions import as_coefficient, as_terminal_function, compile_expression
from pipeline.scenario import Scenario
from utils.config import section

Terminal = Callable[[np.ndarray], np.ndarray]


@dataclass
class RunContext:
    """
    Всё, что нужно проверкам: сценарий, настройки, (f, g), ξ, ансамбль и решение.

    ensemble и solution заполняются раннером после проверки сценария.
    """
    scenario: Scenario
    settings: Dict[str, Any]
    source: str
    root: Any
    output_dir: Path
    threads: int
    core: CoreFunction
    gen: Generator
    endowment: Terminal
    lower: Optional[Terminal] = None
    mix: Optional[Terminal] = None
    ensemble: Optional[PathEnsemble] = None
    solution: Optional[BsdeSolution] = None
    headline: Dict[str, Any] = field(default_factory=dict)

    def output(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def solver_settings(self) -> Dict[str, Any]:
        """Секция bsde настроек с параметрами решателя из сценария."""
        solver = self.scenario.solver
        merged = section(self.settings, "bsde")
        merged.update({"degree": solver.degree, "scheme": solver.scheme, "theta": solver.theta,
                       "threads": self.threads})
        if solver.clip_radius is not None:
            merged["clip_radius"] = solver.clip_radius
        return merged

    def simulate(self, N: Optional[int] = None, M: Optional[int] = None,
                 seed: Optional[int] = None) -> PathEnsemble:
        """Ансамбль сценария (или его вариант с другими N, M, зерном)."""
        return simulate(self.scenario, self.settings, self.threads, N, M, seed)


def build_pair(scenario: Scenario, base_dir: Optional[Path] = None,
               settings: Optional[Dict[str, Any]] = None) -> Tuple[CoreFunction, Generator]:
    """(f, g) по секции core сценария."""
    core_cfg = scenario.core
    params = GrowthParams(dimension=scenario.model.dimension,
                          horizon=scenario.model.horizon).with_overrides(**core_cfg.params)
    if core_cfg.tag is not None:
        core, gen = build_catalogue_entry(core_cfg.tag, params, h=core_cfg.h, qbar=core_cfg.qbar)
    else:
        path = Path(core_cfg.file)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        table = load_tabulated_csv(path, radial=scenario.model.dimension > 1)
        core = core_from_table(table, core_cfg.growth_class, params, h=core_cfg.h, qbar=core_cfg.qbar)
        gen = None

    if core_cfg.generator == "numeric" or gen is None:
        cfg = section(settings, "conjugate")
        box = float(cfg.get("q_box", 12.0))
        points = int(cfg.get("q_points", 4801))
        grid = np.linspace(0.0 if scenario.model.dimension > 1 else -box, box, points)
        gen = numeric_generator(core, grid)
    return core, gen


def build_terminals(scenario: Scenario) -> Tuple[Terminal, Optional[Terminal], Optional[Terminal]]:
    d, horizon, constants = scenario.model.dimension, scenario.model.horizon, scenario.constants

    def terminal(text: Optional[str]) -> Optional[Terminal]:
        if text is None:
            return None
        return as_terminal_function(compile_expression(text, d, constants), horizon)

    return terminal(scenario.endowment), terminal(scenario.endowment_lower), terminal(scenario.endowment_mix)


def simulate(scenario: Scenario, settings: Dict[str, Any], threads: int = 1,
             N: Optional[int] = None, M: Optional[int] = None,
             seed: Optional[int] = None) -> PathEnsemble:
    """Броуновский ансамбль и, если нужно, прямой процесс модели."""
    model = scenario.model
    ens = generate(M or scenario.solver.M, N or scenario.solver.N, model.dimension, model.horizon,
                   scenario.solver.seed if seed is None else seed, threads=threads,
                   settings=settings)
    if model.kind == "brownian":
        return ens
    if model.kind == "gbm":
        b, sigma = model.b, model.sigma
        return forward_sde(ens, lambda t, x: b * x, lambda t, x: sigma * x, model.x0,
                           scheme=model.scheme, gbm=(b, sigma))
    drift = as_coefficient(compile_expression(model.drift, 1, scenario.constants))
    vol = as_coefficient(compile_expression(model.vol, 1, scenario.constants))
    return forward_sde(ens, drift, vol, model.x0, scheme=model.scheme)
