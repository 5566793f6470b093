"""
Аксиомы динамической вогнутой полезности на вычисленных значениях
"""
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from bsde.solver import Endowment, evaluate_endowment, solve_lsmc, split_step, two_stage_solve
from model.functions import CoreFunction, Generator
from paths.ensemble import PathEnsemble
from utils.errors import InputError
from utils.logger import setup_logger

logger = setup_logger(__name__)

AXIOMS = ("monotonicity", "translation", "concavity", "time_consistency")


@dataclass
class AxiomResult:
    """Результат одной проверки с запасом"""
    axiom: str
    parameter: str
    margin: float
    tolerance: float
    passed: bool

    @property
    def slack(self) -> float:
        """Запас до допуска; отрицателен при нарушении."""
        if self.axiom in ("monotonicity", "concavity"):
            return self.margin + self.tolerance
        return self.tolerance - self.margin

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class AxiomReport:
    results: List[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def worst(self, axiom: Optional[str] = None) -> Optional[AxiomResult]:
        rows = [r for r in self.results if axiom is None or r.axiom == axiom]
        return min(rows, key=lambda r: r.slack, default=None)

    def to_rows(self) -> List[Dict[str, Any]]:
        return [r.to_dict() for r in self.results]


def axiom_suite(ens: PathEnsemble, core: CoreFunction, gen: Generator, endowment: Endowment,
                lower: Optional[Endowment] = None, mix: Optional[Endowment] = None,
                translations: Sequence[float] = (1.0, -1.0),
                thetas: Sequence[float] = (0.25, 0.5, 0.75),
                split_time: Optional[float] = None,
                tail_ensemble: Optional[PathEnsemble] = None,
                settings: Optional[Dict[str, Any]] = None,
                solver_settings: Optional[Dict[str, Any]] = None) -> AxiomReport:
    """
    Проверки монотонности, инвариантности к сдвигу, вогнутости и согласованности
    по времени на общем ансамбле.

    Args:
        ens: Общий ансамбль (общие случайные числа)
        core: Функция штрафа (для протокола)
        gen: Генератор
        endowment: ξ
        lower: η ≤ ξ для монотонности, по умолчанию ξ - 1
        mix: η для вогнутости, по умолчанию -ξ
        translations: Сдвиги a
        thetas: Веса смесей
        split_time: t* (по умолчанию ближайший к T/2 узел)
        tail_ensemble: Независимый ансамбль этапа [t*, T]
        settings: Секция axioms настроек (допуски)
        solver_settings: Секция bsde настроек
    """
    settings = settings or {}
    tol_mono = float(settings.get("monotonicity_tol", 0.01))
    tol_shift = float(settings.get("translation_tol", 0.02))
    tol_conc = float(settings.get("concavity_tol", 0.02))
    tol_time = float(settings.get("time_consistency_tol", 0.03))

    def value(xi: np.ndarray) -> float:
        return solve_lsmc(ens, xi, gen, settings=solver_settings).Y0

    xi = evaluate_endowment(ens, endowment)
    eta_low = xi - 1.0 if lower is None else evaluate_endowment(ens, lower)
    eta_mix = -xi if mix is None else evaluate_endowment(ens, mix)
    if np.any(eta_low > xi + 1e-12):
        raise InputError("для монотонности требуется η ≤ ξ на всех траекториях")

    base = value(xi)
    results = []

    margin = base - value(eta_low)
    results.append(AxiomResult("monotonicity", "eta", margin, tol_mono, margin >= -tol_mono))

    for a in translations:
        defect = abs(value(xi + a) - base - a)
        results.append(AxiomResult("translation", f"a={a:+g}", defect, tol_shift, defect <= tol_shift))

    other = value(eta_mix)
    for theta in thetas:
        mixed = value(theta * xi + (1.0 - theta) * eta_mix)
        margin = mixed - (theta * base + (1.0 - theta) * other)
        results.append(AxiomResult("concavity", f"theta={theta:g}", margin, tol_conc,
                                   margin >= -tol_conc))

    if split_time is None:
        split_time = (ens.steps // 2) * ens.dt
    split_step(ens, split_time)
    direct, nested = two_stage_solve(ens, endowment, gen, split_time, settings=solver_settings,
                                     tail_ensemble=tail_ensemble)
    defect = abs(nested - direct)
    results.append(AxiomResult("time_consistency", f"t*={split_time:g}", defect, tol_time,
                               defect <= tol_time))

    report = AxiomReport(results=results)
    for r in results:
        if not r.passed:
            logger.error(f"Аксиома {r.axiom} ({r.parameter}) нарушена: запас {r.margin:.4g}, "
                         f"допуск {r.tolerance:g}")
    logger.info(f"Аксиомы проверены для {core.catalogue_tag or 'f'}: "
                f"{sum(r.passed for r in results)}/{len(results)} пройдено")
    return report
