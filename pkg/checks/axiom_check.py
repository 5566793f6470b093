"""
Проверка аксиом полезности на общем ансамбле
"""
from typing import Any, Dict

from checks.base_check import BaseCheck
from duality.axioms import axiom_suite
from pipeline.reports import write_rows_csv
from pipeline.scenario import anchor_error

COLUMNS = ["axiom", "parameter", "margin", "tolerance", "passed"]


class AxiomCheck(BaseCheck):
    """Монотонность, сдвиг, вогнутость, согласованность по времени"""

    def __init__(self, config: Dict[str, Any], runner=None):
        super().__init__(config, runner)
        self.description = "Аксиомы динамической вогнутой полезности"

    def validate(self, context) -> None:
        if context.scenario.solver.N < 2:
            raise anchor_error(context.root, ("solver", "N"),
                               "solver.N: для согласованности по времени нужно N ≥ 2", context.source)
        super().validate(context)

    def apply(self, context) -> Dict[str, Any]:
        # Этап [t*, T] на независимых траекториях той же модели
        tail = context.simulate(seed=(context.scenario.solver.seed + 1) % 2 ** 64)
        report = axiom_suite(context.ensemble, context.core, context.gen, context.endowment,
                             lower=context.lower, mix=context.mix, tail_ensemble=tail,
                             settings=self.settings("axioms"),
                             solver_settings=context.solver_settings())
        path = write_rows_csv(context.output("axioms.csv"), COLUMNS, report.to_rows())
        worst = report.worst()
        return {
            "success": True,
            "passed": report.passed,
            "artifacts": [path.name],
            "headline": {"worst_axiom_slack": worst.slack if worst else None},
        }
