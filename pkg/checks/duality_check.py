"""
Проверка двойственности: зазор при q* и нижняя граница по постоянным управлениям
"""
from typing import Any, Dict

from checks.base_check import BaseCheck
from duality.attainability import attainability_check
from duality.penalized import scan_constant_controls, write_gap_csv
from utils.logger import setup_logger

logger = setup_logger(__name__)


class DualityCheck(BaseCheck):
    """Зазор двойственности"""

    def __init__(self, config: Dict[str, Any], runner=None):
        super().__init__(config, runner)
        self.description = "Зазор двойственности и нижняя граница"

    def apply(self, context) -> Dict[str, Any]:
        cfg = self.settings("duality")
        solution = context.solution
        report = attainability_check(solution, context.core, context.gen, context.ensemble, cfg)
        scan = scan_constant_controls(context.ensemble, solution.Y[:, -1], context.core,
                                      solution.Y0, solution.y0_std_error, settings=cfg)

        path = write_gap_csv([report.row()] + scan.rows(), context.output("duality_gaps.csv"))
        passed = report.within_tolerance and scan.lower_bound_ok and scan.separated
        if not scan.lower_bound_ok:
            logger.error("Постоянное управление дало значение ниже Y0 за пределами 3σ")
        return {
            "success": True,
            "passed": bool(passed),
            "artifacts": [path.name],
            "headline": {
                "max_duality_gap": report.gap,
                "duality_gap_std_error": report.combined_std_error,
                "max_fenchel_young_residual": report.max_fenchel_young,
                "min_constant_control_value": scan.min_value,
            },
        }
