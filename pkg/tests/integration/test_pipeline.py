"""
Интеграционные тесты запуска сценариев через CLI
"""
import json
import textwrap
from pathlib import Path

import pytest
import yaml

from main import main
from utils.config import load_settings

ROOT = Path(__file__).resolve().parents[2]

SCENARIO = """\
    name: small_entropic
    model:
      kind: brownian
      horizon: 1.0
    endowment: "x"
    endowment_lower: "min(x, 0)"
    core:
      tag: entropic
      params: {gamma: 1.0}
    solver:
      N: 8
      M: 4000
      seed: 3
    checks: [duality, axioms, admissibility, convergence]
    outputs:
      formats: [csv, json]
      dump_paths: 2
    """


@pytest.fixture
def settings_path(tmp_path):
    settings = load_settings()
    settings["convergence"]["levels"] = [[4, 1000], [8, 4000]]
    settings["duality"]["control_count"] = 10
    path = tmp_path / "settings.yaml"
    path.write_text(yaml.safe_dump(settings, allow_unicode=True), encoding="utf-8")
    return path


@pytest.fixture
def scenario_path(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(textwrap.dedent(SCENARIO), encoding="utf-8")
    return path


def run(settings_path, scenario_path, out, *extra) -> int:
    return main(["--settings", str(settings_path), "run", str(scenario_path), "--out", str(out), *extra])


def snapshot(directory: Path):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir()) if p.suffix != ".html"}


class TestRun:
    """Тесты полного запуска"""

    def test_exit_and_artifacts(self, settings_path, scenario_path, tmp_path):
        out = tmp_path / "run"
        assert run(settings_path, scenario_path, out) == 0

        lines = (out / "solution.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "step,t,Y0_regression_value,Z0,R2,clip_count"
        assert len(lines) == 1 + 9

        paths = (out / "paths.csv").read_text(encoding="utf-8").splitlines()
        assert len(paths) == 1 + 2 * 9

        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["seed"] == 3
        assert manifest["run"]["ensemble"]["M"] == 4000
        assert manifest["run"]["solver"]["clip_count"] == 0
        assert manifest["headline"]["Y0"] == pytest.approx(-0.5, abs=0.1)
        assert manifest["headline"]["acceptable"] is True
        assert set(manifest["checks"]) == {"duality", "axioms", "admissibility", "convergence"}
        assert all(c["success"] for c in manifest["checks"].values())
        for name in ("duality_gaps.csv", "axioms.csv", "admissibility.csv", "convergence.csv"):
            assert name in manifest["artifacts"]
            assert (out / name).exists()

    def test_reproducible_across_threads(self, settings_path, scenario_path, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        assert run(settings_path, scenario_path, first, "--threads", "1") == 0
        assert run(settings_path, scenario_path, second, "--threads", "3") == 0

        assert snapshot(first) == snapshot(second)

    def test_unknown_tag(self, settings_path, scenario_path, tmp_path):
        scenario_path.write_text(scenario_path.read_text(encoding="utf-8").replace(
            "tag: entropic", "tag: entropy"), encoding="utf-8")
        out = tmp_path / "bad"

        assert run(settings_path, scenario_path, out) == 2
        assert not (out / "manifest.json").exists()

    def test_missing_scenario(self, settings_path, tmp_path):
        assert run(settings_path, tmp_path / "absent.yaml", tmp_path / "out") == 2

    def test_invalid_threads(self, settings_path, scenario_path, tmp_path):
        with pytest.raises(SystemExit):
            run(settings_path, scenario_path, tmp_path / "out", "--threads", "0")


class TestCompareCommand:
    """Тесты команды compare"""

    def test_same_seed_empty_diff(self, settings_path, scenario_path, tmp_path, capsys):
        run(settings_path, scenario_path, tmp_path / "a")
        run(settings_path, scenario_path, tmp_path / "b")
        capsys.readouterr()

        code = main(["compare", str(tmp_path / "a" / "manifest.json"), str(tmp_path / "b" / "manifest.json")])
        report = json.loads(capsys.readouterr().out)

        assert code == 0
        assert report["differences"] == []
        assert report["headline_deltas"] == {}

    def test_seed_change_reported(self, settings_path, scenario_path, tmp_path, capsys):
        run(settings_path, scenario_path, tmp_path / "a")
        scenario_path.write_text(scenario_path.read_text(encoding="utf-8").replace(
            "seed: 3", "seed: 4"), encoding="utf-8")
        run(settings_path, scenario_path, tmp_path / "b")
        capsys.readouterr()

        main(["compare", str(tmp_path / "a" / "manifest.json"), str(tmp_path / "b" / "manifest.json")])
        report = json.loads(capsys.readouterr().out)
        keys = {d["key"] for d in report["differences"]}

        assert {"seed", "scenario.solver.seed"} <= keys
        assert "Y0" in report["headline_deltas"]

    def test_missing_manifest(self, tmp_path):
        assert main(["compare", str(tmp_path / "a.json"), str(tmp_path / "b.json")]) == 2


@pytest.mark.slow
class TestShippedScenarios:
    """Полные сценарии из config/scenarios"""

    @pytest.mark.parametrize("name", ["entropic", "linear_dirac", "drift_band", "call_option"])
    def test_scenario_runs(self, name, tmp_path):
        out = tmp_path / name
        assert main(["run", str(ROOT / "config" / "scenarios" / f"{name}.yaml"), "--out", str(out)]) == 0

        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["headline"]["acceptable"] is True
        assert all(c["success"] for c in manifest["checks"].values())
