"""
Unit тесты проверок и раннера
"""
import textwrap

import pytest

from checks import BaseCheck, CheckStatus, error_kind
from checks.convergence_check import nonincreasing_trend
from pipeline.runner import EXIT_NUMERICAL, EXIT_SCENARIO, ScenarioRunner, exit_code
from utils.errors import BlowupError, InputError, ParamError, ScenarioError


class FailingCheck(BaseCheck):
    def __init__(self, config, error):
        super().__init__(config)
        self.error = error

    def apply(self, context):
        raise self.error


class PassingCheck(BaseCheck):
    def apply(self, context):
        return {"success": True, "passed": True, "artifacts": [], "headline": {"value": 1.0}}


def write_scenario(tmp_path, body: str):
    path = tmp_path / "scenario.yaml"
    path.write_text(textwrap.dedent(body), encoding="utf-8")
    return path


SMALL = """\
    name: small
    endowment: "x"
    core:
      tag: entropic
    solver:
      N: 4
      M: 200
      seed: 1
    checks: [{checks}]
    """


class TestBaseCheck:
    """Тесты базового класса"""

    def test_name_from_class(self):
        assert PassingCheck({}).name == "passing"

    def test_success(self):
        check = PassingCheck({})
        result = check.execute(None)

        assert result["success"]
        assert check.status is CheckStatus.READY
        assert check.get_history()[0]["passed"] is True

    def test_numerical_failure(self):
        check = FailingCheck({}, BlowupError("неконечное состояние", step=3, module="paths"))
        result = check.execute(None)

        assert not result["success"]
        assert result["kind"] == "numerical"
        assert result["cause"].startswith("paths: BlowupError:")
        assert check.status is CheckStatus.ERROR
        assert check.metrics["errors"] == 1

    def test_foreign_failure(self):
        check = FailingCheck({}, ValueError("boom"))
        result = check.execute(None)

        assert result["kind"] == "other"
        assert result["cause"] == "failing: ValueError: boom"

    def test_error_kinds(self):
        assert error_kind(ScenarioError("x")) == "scenario"
        assert error_kind(InputError("x")) == "scenario"
        assert error_kind(ParamError("x")) == "utility"
        assert error_kind(KeyError("x")) == "other"
        assert exit_code(BlowupError("x")) == EXIT_NUMERICAL
        assert exit_code(ScenarioError("x")) == EXIT_SCENARIO


class TestTrend:
    """Тесты монотонности ошибок по уровням"""

    def test_decreasing(self):
        assert nonincreasing_trend([0.3, 0.2, 0.1], [0.01] * 3)

    def test_single_small_rise(self):
        assert nonincreasing_trend([0.3, 0.305, 0.1], [0.01] * 3)

    def test_large_rise(self):
        assert not nonincreasing_trend([0.1, 0.3], [0.01, 0.01])

    def test_too_many_rises(self):
        assert not nonincreasing_trend([0.1, 0.105, 0.11], [0.01] * 3)


class TestRunner:
    """Тесты загрузки проверок и подготовки сценария"""

    @pytest.fixture
    def runner(self):
        return ScenarioRunner()

    def test_registry_loaded(self, runner):
        assert set(runner.checks) == {"duality", "axioms", "inequalities", "admissibility",
                                      "conjugation", "convergence"}
        assert runner.get_status()["checks"]["duality"]["status"] == "initializing"

    def test_disabled_check_skipped(self, tmp_path):
        settings = tmp_path / "settings.yaml"
        settings.write_text(textwrap.dedent("""\
            checks:
              - {name: duality, module: duality_check, class: DualityCheck, enabled: false}
              - {name: axioms, module: axiom_check, class: AxiomCheck}
            """), encoding="utf-8")
        assert list(ScenarioRunner(settings).checks) == ["axioms"]

    def test_thread_precedence(self, runner, tmp_path, monkeypatch):
        context = runner.prepare(write_scenario(tmp_path, SMALL.format(checks="")))
        monkeypatch.setenv("UTILITY_THREADS", "3")
        assert runner.resolve_threads(context.scenario) == 3

        runner.cli_threads = 2
        assert runner.resolve_threads(context.scenario) == 2

        runner.cli_threads = None
        monkeypatch.delenv("UTILITY_THREADS")
        assert runner.resolve_threads(context.scenario) == 1

    def test_bad_thread_env(self, runner, tmp_path, monkeypatch):
        context = runner.prepare(write_scenario(tmp_path, SMALL.format(checks="")))
        monkeypatch.setenv("UTILITY_THREADS", "many")
        with pytest.raises(ScenarioError):
            runner.resolve_threads(context.scenario)

    def test_axioms_need_two_steps(self, runner, tmp_path):
        body = SMALL.format(checks="axioms").replace("N: 4", "N: 1")
        with pytest.raises(ScenarioError) as excinfo:
            runner.prepare(write_scenario(tmp_path, body))
        assert excinfo.value.line == 6

    def test_unknown_check_rejected(self, runner, tmp_path):
        path = write_scenario(tmp_path, SMALL.format(checks="duality, nothing"))
        assert runner.run(path) == EXIT_SCENARIO

    def test_unknown_inequality_id(self, tmp_path):
        settings = tmp_path / "settings.yaml"
        settings.write_text(textwrap.dedent("""\
            inequalities: {ids: [young_classic, young_unknown]}
            checks:
              - {name: inequalities, module: inequality_check, class: InequalityCheck}
            """), encoding="utf-8")
        runner = ScenarioRunner(settings)
        with pytest.raises(ScenarioError, match="young_unknown"):
            runner.prepare(write_scenario(tmp_path, SMALL.format(checks="inequalities")))
