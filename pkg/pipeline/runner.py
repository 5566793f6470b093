"""
Раннер сценария: проверка, решение BSDE, проверки и отчёты
"""
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from bsde.solver import solve_lsmc
from checks.base_check import BaseCheck, error_kind
from paths.ensemble import dump_paths_csv
from pipeline import __version__
from pipeline.context import RunContext, build_pair, build_terminals
from pipeline.reports import build_manifest, write_manifest
from pipeline.scenario import Scenario, anchor_error, load_scenario
from utils.config import load_settings, section
from utils.errors import ConjugateError, InputError, ModelError, ScenarioError, UtilityError
from utils.logger import configure_logging, setup_logger

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_SCENARIO = 2
EXIT_NUMERICAL = 3

_EXIT_BY_KIND = {"scenario": EXIT_SCENARIO, "numerical": EXIT_NUMERICAL,
                 "utility": EXIT_NUMERICAL, "other": EXIT_OTHER}


def exit_code(error: BaseException) -> int:
    """Код возврата по типу ошибки."""
    return _EXIT_BY_KIND[error_kind(error)]


class ScenarioRunner:
    """
    Оркестратор одного запуска.

    Проверки подключаются по реестру checks из настроек; всё, что можно
    проверить без вычислений, проверяется в prepare() до генерации траекторий.
    """

    def __init__(self, settings_path: Optional[Union[str, Path]] = None,
                 threads: Optional[int] = None, output_dir: Optional[Union[str, Path]] = None):
        """
        Args:
            settings_path: Путь к настройкам библиотеки.
            threads (int): Число потоков из командной строки.
            output_dir: Каталог результатов вместо указанного в сценарии.
        """
        self.settings = load_settings(settings_path)
        configure_logging(self.settings)
        self.cli_threads = threads
        self.output_dir = Path(output_dir) if output_dir else None

        self.checks: Dict[str, BaseCheck] = {}
        self._load_checks()
        self.results: Dict[str, Dict[str, Any]] = {}

    def _load_checks(self):
        """Динамическая загрузка проверок."""
        for check_config in self.settings.get('checks', []) or []:
            if not check_config.get('enabled', True):
                continue
            try:
                module_path = f"checks.{check_config['module']}"
                class_name = check_config['class']
                module = __import__(module_path, fromlist=[class_name])
                check_class = getattr(module, class_name)
                check = check_class(self.settings, runner=self)
                check.name = check_config.get('name', check.name)
                self.checks[check.name] = check
                logger.debug(f"Загружена проверка: {check.name}")
            except Exception as e:
                logger.error(f"Не удалось загрузить проверку {check_config}: {e}")

    def resolve_threads(self, scenario: Scenario) -> int:
        """--threads > UTILITY_THREADS > solver.threads > runner.threads."""
        if self.cli_threads is not None:
            return self.cli_threads
        env = os.getenv("UTILITY_THREADS")
        if env:
            try:
                value = int(env)
            except ValueError:
                raise ScenarioError(f"UTILITY_THREADS должно быть целым, получено '{env}'")
            if value < 1:
                raise ScenarioError(f"UTILITY_THREADS должно быть ≥ 1, получено {value}")
            return value
        if scenario.solver.threads is not None:
            return scenario.solver.threads
        return int(section(self.settings, "runner").get("threads", 1))

    def prepare(self, config_path: Union[str, Path]) -> RunContext:
        """
        Разбор сценария и проверка всех целей до вычислений.

        Raises:
            ScenarioError: с привязкой к строке сценария.
        """
        config_path = Path(config_path)
        scenario, root = load_scenario(config_path, checks=list(self.checks))
        source = str(config_path)

        try:
            core, gen = build_pair(scenario, base_dir=config_path.parent, settings=self.settings)
        except (ModelError, ConjugateError) as e:
            raise anchor_error(root, ("core",), f"core: {e.cause}", source) from e

        endowment, lower, mix = build_terminals(scenario)
        output_dir = self.output_dir or Path(
            scenario.outputs.directory or section(self.settings, "runner").get("output_dir", "results"))
        context = RunContext(scenario=scenario, settings=self.settings, source=source, root=root,
                             output_dir=output_dir, threads=self.resolve_threads(scenario),
                             core=core, gen=gen, endowment=endowment, lower=lower, mix=mix)

        if ("axioms" in scenario.checks) and lower is None:
            logger.warning("endowment_lower не задан: монотонность проверяется с ξ - 1")
        for name in scenario.checks:
            self.checks[name].validate(context)
        logger.info(f"Сценарий '{scenario.name}' проверен: {len(scenario.checks)} проверок")
        return context

    def solve(self, context: RunContext) -> None:
        scenario = context.scenario
        context.ensemble = context.simulate()
        context.solution = solve_lsmc(context.ensemble, context.endowment, context.gen,
                                      settings=context.solver_settings())
        context.headline.update({"Y0": context.solution.Y0,
                                 "y0_std_error": context.solution.y0_std_error,
                                 "acceptable": context.solution.acceptable})
        logger.info(f"Сценарий '{scenario.name}': Y0 = {context.solution.Y0:.6g} "
                    f"± {context.solution.y0_std_error:.2g}")

    def run_checks(self, context: RunContext) -> int:
        """Проверки в порядке сценария; код возврата по первой упавшей."""
        code = EXIT_OK
        for name in context.scenario.checks:
            result = self.checks[name].execute(context)
            self.results[name] = {key: result.get(key) for key in ("success", "passed", "cause")
                                  if result.get(key) is not None}
            if result.get("success"):
                context.headline.update(result.get("headline", {}))
                self.results[name]["artifacts"] = sorted(result.get("artifacts", []))
                if result.get("passed") is False:
                    logger.error(f"Проверка {name} не пройдена")
            elif code == EXIT_OK:
                code = _EXIT_BY_KIND[result.get("kind", "other")]
        return code

    def write_outputs(self, context: RunContext) -> List[str]:
        scenario = context.scenario
        artifacts = [context.solution.export_csv(context.output("solution.csv")).name]
        if scenario.outputs.dump_paths:
            artifacts.append(dump_paths_csv(context.ensemble, context.output("paths.csv"),
                                            scenario.outputs.dump_paths).name)
        for result in self.results.values():
            artifacts.extend(result.get("artifacts", []))
        return artifacts

    def run(self, config_path: Union[str, Path]) -> int:
        """
        Полный запуск сценария.

        Returns:
            int: 0 успех, 2 ошибка сценария, 3 численный сбой, 1 прочее.
        """
        # Проверка сценария до вычислений
        try:
            context = self.prepare(config_path)
        except (ScenarioError, InputError) as e:
            logger.error(f"Сценарий отклонён: {e}")
            return EXIT_SCENARIO

        # Решение BSDE
        try:
            self.solve(context)
        except UtilityError as e:
            logger.error(f"Решение не получено: {e.cause}")
            return exit_code(e)

        # Проверки и отчеты
        code = self.run_checks(context)
        artifacts = self.write_outputs(context)
        manifest = build_manifest(context.scenario.resolved(), self.settings, __version__,
                                  context.scenario.solver.seed, context.headline, self.results,
                                  artifacts + ["manifest.json"],
                                  run={"ensemble": context.ensemble.describe(),
                                       "solver": context.solution.summary()})
        write_manifest(context.output("manifest.json"), manifest)
        logger.info(f"Запуск завершён с кодом {code}, результаты в {context.output_dir}")
        return code

    def get_status(self) -> Dict[str, Any]:
        return {"version": __version__, "checks": {n: c.get_status() for n, c in self.checks.items()}}
