"""
Допустимость нулевого, опорного и оптимального управлений
"""
from typing import Any, Dict

import numpy as np

from checks.base_check import BaseCheck
from duality.admissibility import admissibility_check
from duality.attainability import optimal_controls
from duality.penalized import Admissibility
from pipeline.reports import write_rows_csv

COLUMNS = ["control_id", "status", "finite_penalty", "mean_terminal", "mean_std_error",
           "ui_half", "ui_full", "ui_stable"]


class AdmissibilityCheck(BaseCheck):
    """Трёхзначная допустимость"""

    def __init__(self, config: Dict[str, Any], runner=None):
        super().__init__(config, runner)
        self.description = "Допустимость управлений"

    def apply(self, context) -> Dict[str, Any]:
        cfg = self.settings("duality")
        core = context.core
        controls = {
            "zero": 0.0,
            "anchor": lambda t, x: np.asarray(core.anchor_qbar(t), dtype=float)[None, :],
            "optimal": optimal_controls(context.solution, context.gen),
        }
        rows = []
        statuses = {}
        for control_id, control in controls.items():
            report = admissibility_check(context.ensemble, context.solution.Y[:, -1], core, control, cfg)
            statuses[control_id] = report.status
            row = report.to_dict()
            row["control_id"] = control_id
            row["status"] = report.status.value
            rows.append(row)

        path = write_rows_csv(context.output("admissibility.csv"), COLUMNS, rows)
        passed = all(statuses[c] is not Admissibility.NO for c in ("zero", "anchor"))
        return {
            "success": True,
            "passed": passed,
            "artifacts": [path.name],
            "headline": {f"admissible_{c}": s.value for c, s in statuses.items()},
        }
