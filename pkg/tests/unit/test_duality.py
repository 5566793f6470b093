"""
Unit тесты двойственного представления
"""
from dataclasses import replace

import numpy as np
import pytest

from bsde.solver import solve_lsmc
from duality.admissibility import admissibility_check, ui_statistic
from duality.attainability import attainability_check, optimal_controls
from duality.axioms import axiom_suite
from duality.penalized import (
    Admissibility, GAP_COLUMNS, GapRow, constant_controls, penalized_expectation,
    scan_constant_controls, weight_diagnostics, write_gap_csv,
)
from duality.risk import risk_measure
from model.catalogue import CATALOGUE_TAGS, build_catalogue_entry
from model.growth import GrowthParams
from paths.density import stochastic_exponential
from paths.ensemble import generate
from utils.errors import AttainabilityError, InputError


@pytest.fixture(scope="module")
def ensemble():
    return generate(20000, 16, 1, 1.0, seed=33)


@pytest.fixture(scope="module")
def small_ensemble():
    return generate(8000, 8, 1, 1.0, seed=1)


@pytest.fixture(scope="module")
def entropic():
    return build_catalogue_entry("entropic", GrowthParams(gamma=1.0))


@pytest.fixture(scope="module")
def entropic_solution(ensemble, entropic):
    _, gen = entropic
    return solve_lsmc(ensemble, lambda x: x, gen)


def identity(x):
    return x


class TestPenalizedExpectation:
    """Тесты штрафованного ожидания"""

    def test_zero_control_is_plain_mean(self, ensemble, entropic):
        core, _ = entropic
        estimate = penalized_expectation(ensemble, identity, core, 0.0)

        assert estimate.value == pytest.approx(ensemble.levels[:, -1, 0].mean())
        assert estimate.admissible is Admissibility.YES

    def test_constant_control_value(self, ensemble, entropic):
        core, _ = entropic
        estimate = penalized_expectation(ensemble, identity, core, -1.0)

        assert estimate.value == pytest.approx(-0.5, abs=4.0 * estimate.std_error + 0.01)

    def test_outside_domain_is_infinite(self, ensemble):
        core, _ = build_catalogue_entry("drift_band", GrowthParams(gamma=0.5))
        estimate = penalized_expectation(ensemble, identity, core, 2.0)

        assert estimate.value == np.inf
        assert estimate.admissible is Admissibility.NO

    def test_time_must_be_node(self, ensemble, entropic):
        core, _ = entropic
        with pytest.raises(InputError):
            penalized_expectation(ensemble, identity, core, 0.0, t=0.3)

    def test_conditional_estimate(self, ensemble, entropic):
        core, _ = entropic
        estimate = penalized_expectation(ensemble, identity, core, 0.0, t=0.5)

        assert estimate.conditional.shape == (ensemble.paths,)
        assert estimate.conditional == pytest.approx(ensemble.levels[:, 8, 0], abs=0.1)

    def test_weight_diagnostics_uniform(self):
        diagnostics = weight_diagnostics(np.zeros(100))

        assert diagnostics.effective_sample_size == pytest.approx(100.0)
        assert diagnostics.max_weight_share == pytest.approx(0.01)
        assert diagnostics.martingale_ok

    def test_degenerate_weights(self):
        log_w = np.full(100, -50.0)
        log_w[0] = np.log(100.0)
        diagnostics = weight_diagnostics(log_w)

        assert diagnostics.effective_sample_size == pytest.approx(1.0, rel=1e-6)

    def test_gap_csv(self, ensemble, entropic, tmp_path):
        core, _ = entropic
        row = GapRow.from_estimate(penalized_expectation(ensemble, identity, core, 0.0, control_id="zero"), 0.0)
        lines = write_gap_csv([row], tmp_path / "gaps.csv").read_text(encoding="utf-8").splitlines()

        assert lines[0] == ",".join(GAP_COLUMNS)
        assert lines[1].startswith("zero,")


class TestAttainability:
    """Тесты достижимости на q*"""

    def test_gap_within_tolerance(self, ensemble, entropic, entropic_solution):
        core, gen = entropic
        report = attainability_check(entropic_solution, core, gen, ensemble)

        assert report.within_tolerance
        assert report.max_fenchel_young == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("tag", CATALOGUE_TAGS)
    def test_every_catalogue_pair_closes_gap(self, small_ensemble, tag):
        core, gen = build_catalogue_entry(tag)
        solution = solve_lsmc(small_ensemble, lambda x: 0.1 * np.tanh(x), gen)
        report = attainability_check(solution, core, gen, small_ensemble)

        assert report.within_tolerance
        assert report.max_fenchel_young == pytest.approx(0.0, abs=1e-8)

    def test_exponential_below_unit_slope(self, small_ensemble):
        core, gen = build_catalogue_entry("exponential")
        solution = solve_lsmc(small_ensemble, lambda x: 0.1 * x, gen)
        report = attainability_check(solution, core, gen, small_ensemble)

        assert solution.Y0 == pytest.approx(1.0, abs=0.01)
        assert report.estimate.value == pytest.approx(solution.Y0, abs=0.01)
        assert report.within_tolerance

    def test_optimal_controls_shape(self, entropic, entropic_solution):
        _, gen = entropic
        q = optimal_controls(entropic_solution, gen)

        assert q.shape == entropic_solution.Z.shape
        assert q == pytest.approx(entropic_solution.Z)

    def test_selector_outside_domain(self, ensemble, entropic_solution):
        core, gen = build_catalogue_entry("drift_band", GrowthParams(gamma=0.5))
        broken = replace(gen, selector_func=lambda t, z: np.full_like(z, 3.0))

        with pytest.raises(AttainabilityError) as excinfo:
            attainability_check(entropic_solution, core, broken, ensemble)
        assert excinfo.value.step == 0

    def test_constant_controls_bound_y0(self, ensemble, entropic, entropic_solution):
        core, _ = entropic
        scan = scan_constant_controls(ensemble, identity, core, entropic_solution.Y0,
                                      entropic_solution.y0_std_error, count=20)

        assert scan.lower_bound_ok
        assert scan.separated
        assert len(scan.rows()) == len(scan.estimates)

    def test_point_domain_has_single_control(self):
        core, _ = build_catalogue_entry("linear_dirac", qbar=0.5)
        controls = constant_controls(core, (-3.0, 3.0), 50)

        assert len(controls) == 1
        assert controls[0] == pytest.approx([0.5])


class TestAdmissibility:
    """Тесты трёхзначной допустимости"""

    def test_zero_control_admissible(self, ensemble, entropic):
        core, _ = entropic
        report = admissibility_check(ensemble, identity, core, 0.0)

        assert report.status is Admissibility.YES
        assert not report.reasons

    def test_infinite_penalty_not_admissible(self, ensemble):
        core, _ = build_catalogue_entry("drift_band", GrowthParams(gamma=0.5))
        report = admissibility_check(ensemble, identity, core, 1.0)

        assert report.status is Admissibility.NO
        assert report.to_dict()["status"] == "no"

    def test_ui_statistic_sizes(self, ensemble):
        density = stochastic_exponential(ensemble, 0.0)
        stats = ui_statistic(density)

        assert [n for n, _, _ in stats] == [ensemble.paths // 2, ensemble.paths]
        assert stats[1][1] == pytest.approx(np.log(2.0))


class TestAxioms:
    """Тесты аксиом"""

    def test_entropic_suite_passes(self, ensemble, entropic):
        core, gen = entropic
        report = axiom_suite(ensemble, core, gen, identity)

        assert report.passed
        assert {r.axiom for r in report.results} == {"monotonicity", "translation", "concavity",
                                                     "time_consistency"}
        assert report.worst().slack >= 0.0

    def test_lower_must_be_dominated(self, ensemble, entropic):
        core, gen = entropic
        with pytest.raises(InputError):
            axiom_suite(ensemble, core, gen, identity, lower=lambda x: x + 1.0)

    def test_risk_measure(self, ensemble, entropic):
        _, gen = entropic
        rho, se = risk_measure(ensemble, identity, gen)

        assert rho == pytest.approx(0.5, abs=0.03)
        assert se > 0.0
