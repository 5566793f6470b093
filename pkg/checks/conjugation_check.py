"""
Численное сопряжение функций каталога против замкнутых формул
"""
from typing import Any, Dict

from checks.base_check import BaseCheck
from conjugate.legendre import conjugation_report
from model.catalogue import CATALOGUE_TAGS
from pipeline.reports import write_rows_csv

COLUMNS = ["tag", "compared", "max_deviation", "worst_z", "mismatches", "documented_mismatches",
           "discrepancy_lo", "discrepancy_hi", "extrapolated", "biconjugate_deviation",
           "biconjugate_tolerance", "passed"]

# точечная область: таблица из одного конечного значения
DEFAULT_TAGS = tuple(t for t in CATALOGUE_TAGS if t != "linear_dirac")


class ConjugationCheck(BaseCheck):
    """Отчёт о сопряжении"""

    def __init__(self, config: Dict[str, Any], runner=None):
        super().__init__(config, runner)
        self.description = "Преобразование Лежандра против замкнутых g"

    def apply(self, context) -> Dict[str, Any]:
        cfg = self.settings("conjugate")
        rows = conjugation_report(cfg.get("report_tags") or DEFAULT_TAGS,
                                  q_box=float(cfg.get("q_box", 12.0)),
                                  q_points=int(cfg.get("q_points", 4801)),
                                  z_box=float(cfg.get("z_box", 5.0)),
                                  z_points=int(cfg.get("z_points", 401)))
        path = write_rows_csv(context.output("conjugation.csv"), COLUMNS, [r.to_dict() for r in rows])
        return {
            "success": True,
            "passed": all(r.passed for r in rows),
            "artifacts": [path.name],
            "headline": {"conjugation_max_deviation": max((r.max_deviation for r in rows), default=0.0)},
        }
