"""
Сходимость Y0 по уровням измельчения (N, M)
"""
from typing import Any, Dict, List

from bsde.oracles import catalogue_oracle
from bsde.solver import evaluate_endowment, solve_lsmc
from checks.base_check import BaseCheck
from pipeline.reports import write_convergence_html, write_rows_csv
from utils.logger import setup_logger

logger = setup_logger(__name__)

COLUMNS = ["level", "N", "M", "Y0", "std_error", "oracle", "abs_error"]
DEFAULT_LEVELS = ((16, 12500), (32, 50000), (64, 200000))


def nonincreasing_trend(errors: List[float], tolerances: List[float], allowed: int = 1) -> bool:
    """Ошибки не растут, кроме не более allowed нарушений в пределах допуска."""
    violations = 0
    for i in range(1, len(errors)):
        if errors[i] > errors[i - 1]:
            if errors[i] - errors[i - 1] > tolerances[i]:
                return False
            violations += 1
    return violations <= allowed


class ConvergenceCheck(BaseCheck):
    """Y0 по уровням и сравнение с оракулом"""

    def __init__(self, config: Dict[str, Any], runner=None):
        super().__init__(config, runner)
        self.description = "Сходимость при измельчении"

    def apply(self, context) -> Dict[str, Any]:
        cfg = self.settings("convergence")
        levels = [tuple(level) for level in cfg.get("levels", DEFAULT_LEVELS)]
        rows = []
        for index, (N, M) in enumerate(levels):
            ens = context.simulate(int(N), int(M))
            solution = solve_lsmc(ens, context.endowment, context.gen,
                                  settings=context.solver_settings())
            xi = evaluate_endowment(ens, context.endowment)
            level = ens.levels[:, -1, 0] if ens.state is None and ens.dimension == 1 else None
            oracle = catalogue_oracle(context.core, xi, level, ens.horizon)
            rows.append({
                "level": index, "N": int(N), "M": int(M), "Y0": solution.Y0,
                "std_error": solution.y0_std_error, "oracle": oracle,
                "abs_error": abs(solution.Y0 - oracle) if oracle is not None else None,
            })

        artifacts = [write_rows_csv(context.output("convergence.csv"), COLUMNS, rows).name]
        if "html" in context.scenario.outputs.formats:
            artifacts.append(write_convergence_html(context.output("convergence.html"), rows).name)

        passed = None
        if all(r["oracle"] is not None for r in rows):
            passed = nonincreasing_trend([r["abs_error"] for r in rows],
                                         [3.0 * r["std_error"] for r in rows])
            if not passed:
                logger.error("Ошибка относительно оракула растёт при измельчении")
        return {
            "success": True,
            "passed": passed,
            "artifacts": artifacts,
            "headline": {"convergence_last_error": rows[-1]["abs_error"] if rows else None},
        }
