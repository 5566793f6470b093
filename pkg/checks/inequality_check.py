"""
Проверка неравенств: поточечные по выборкам параметров и стохастические на ансамбле
"""
from typing import Any, Dict, List

from checks.base_check import BaseCheck
from inequalities.pointwise import check_pointwise, write_report_csv
from inequalities.specs import POINTWISE_IDS, REGISTRY, STOCHASTIC_IDS, draw_parameters, make_spec
from inequalities.stochastic import mc_bound_check
from pipeline.scenario import anchor_error


class InequalityCheck(BaseCheck):
    """Неравенства типа Юнга и оценки для стохастических экспонент"""

    def __init__(self, config: Dict[str, Any], runner=None):
        super().__init__(config, runner)
        self.description = "Поточечные и стохастические неравенства"

    def validate(self, context) -> None:
        cfg = self.settings("inequalities")
        unknown = [i for i in cfg.get("ids", []) if i not in REGISTRY]
        if unknown:
            raise anchor_error(context.root, ("checks",),
                               f"checks: неизвестные неравенства в настройках {unknown}", context.source)
        super().validate(context)

    def apply(self, context) -> Dict[str, Any]:
        cfg = self.settings("inequalities")
        ids = cfg.get("ids") or list(REGISTRY)
        samples = int(cfg.get("samples", 100_000))
        draws = int(cfg.get("draws", 10))
        seed = int(cfg.get("seed", 0))
        controls = [float(c) for c in cfg.get("controls", (0.0, 1.0, 2.0))]
        overrides = cfg.get("params", {}) or {}

        rows: List[Dict[str, Any]] = []
        failures = 0
        for ident in (i for i in POINTWISE_IDS if i in ids):
            count = draws if REGISTRY[ident].parameters else 1
            for j, spec in enumerate(draw_parameters(ident, count, seed)):
                report = check_pointwise(spec, samples, seed + j)
                rows.append(report.row())
                failures += report.violations

        ens = context.ensemble
        for ident in (i for i in STOCHASTIC_IDS if i in ids):
            params = {"horizon": ens.horizon, **overrides.get(ident, {})}
            spec = make_spec(ident, params)
            for control in controls:
                bound = mc_bound_check(spec, ens, control)
                row = bound.row()
                row["params"] += f";control={format(control, '.17g')}"
                row["samples"] = ens.paths
                rows.append(row)
                failures += 0 if bound.holds else 1

        path = write_report_csv(rows, context.output("inequalities.csv"))
        return {
            "success": True,
            "passed": failures == 0,
            "artifacts": [path.name],
            "headline": {"inequality_violations": failures},
        }
