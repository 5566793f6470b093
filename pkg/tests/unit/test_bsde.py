"""
Unit тесты решателя BSDE и оракулов
"""
import numpy as np
import pytest

from bsde.oracles import (
    affine_fit, affine_oracle, catalogue_oracle, entropic_oracle, entropic_oracle_ci,
)
from bsde.regression import BasisSpec, ConditionalRegression, PolynomialBasis, normal_equations
from bsde.solver import (
    evaluate_endowment, solve_lsmc, split_step, standard_form_solve, to_standard_form,
    two_stage_solve,
)
from model.catalogue import build_catalogue_entry
from model.growth import GrowthParams
from paths.ensemble import generate
from utils.errors import InputError, OracleError, ParamError


@pytest.fixture(scope="module")
def ensemble():
    return generate(20000, 16, 1, 1.0, seed=21)


@pytest.fixture(scope="module")
def entropic():
    return build_catalogue_entry("entropic", GrowthParams(gamma=1.0))


def brownian_terminal(x):
    return x


class TestRegression:
    """Тесты регрессии"""

    def test_blockwise_normal_equations(self):
        rng = np.random.default_rng(0)
        design = rng.normal(size=(1000, 4))
        targets = rng.normal(size=(1000, 2))
        gram, rhs = normal_equations(design, targets, block=128, threads=3)

        assert gram == pytest.approx(design.T @ design)
        assert rhs == pytest.approx(design.T @ targets)

    def test_constant_features_give_intercept_only(self):
        basis = PolynomialBasis(np.ones((50, 1)), degree=4)
        assert basis.degree == 0
        assert basis.size == 1

    def test_basis_size(self):
        basis = PolynomialBasis(np.random.default_rng(1).normal(size=(100, 2)), degree=2)
        assert basis.size == 6

    def test_projection_of_polynomial_is_exact(self):
        x = np.linspace(-1.0, 1.0, 200)
        reg = ConditionalRegression(x[:, None], degree=3)
        fitted, _, r2 = reg.project((1.0 + x - 2.0 * x ** 3)[:, None])

        assert fitted[:, 0] == pytest.approx(1.0 + x - 2.0 * x ** 3, abs=1e-9)
        assert r2[0] == pytest.approx(1.0)


class TestSolver:
    """Тесты обратной схемы"""

    def test_entropic_matches_oracle(self, ensemble, entropic):
        _, gen = entropic
        solution = solve_lsmc(ensemble, brownian_terminal, gen)
        xi = evaluate_endowment(ensemble, brownian_terminal)

        assert solution.Y0 == pytest.approx(-0.5, abs=0.03)
        assert solution.Y0 == pytest.approx(entropic_oracle(xi, 1.0), abs=0.03)
        assert solution.acceptable
        assert solution.Z[:, 3, 0].mean() == pytest.approx(-1.0, abs=0.05)

    def test_linear_dirac(self, ensemble):
        _, gen = build_catalogue_entry("linear_dirac", h=0.2, qbar=0.5)
        solution = solve_lsmc(ensemble, lambda x: 2.0 * x + 1.0, gen)

        assert solution.Y0 == pytest.approx(affine_oracle("linear_dirac", 2.0, 1.0, 0.0, 1.0,
                                                          qbar=0.5, h=0.2), abs=0.03)

    def test_drift_band(self, ensemble):
        _, gen = build_catalogue_entry("drift_band", GrowthParams(gamma=0.5))
        solution = solve_lsmc(ensemble, brownian_terminal, gen)

        assert solution.Y0 == pytest.approx(-0.5, abs=0.03)

    def test_drift_band_unit_gamma(self, ensemble):
        _, gen = build_catalogue_entry("drift_band", GrowthParams(gamma=1.0))
        assert solve_lsmc(ensemble, brownian_terminal, gen).Y0 == pytest.approx(-1.0, abs=0.03)

    def test_linear_dirac_brownian_terminal(self, ensemble):
        _, gen = build_catalogue_entry("linear_dirac", h=0.2, qbar=0.5)
        assert solve_lsmc(ensemble, brownian_terminal, gen).Y0 == pytest.approx(0.7, abs=0.03)

    def test_theta_scheme(self, ensemble, entropic):
        _, gen = entropic
        solution = solve_lsmc(ensemble, brownian_terminal, gen, scheme="theta", theta=0.5)

        assert solution.scheme == "theta"
        assert solution.Y0 == pytest.approx(-0.5, abs=0.03)

    def test_threads_do_not_change_result(self, ensemble, entropic):
        _, gen = entropic
        one = solve_lsmc(ensemble, brownian_terminal, gen, threads=1)
        four = solve_lsmc(ensemble, brownian_terminal, gen, threads=4)

        assert np.array_equal(one.Y, four.Y)

    def test_standard_form_gives_same_values(self, ensemble, entropic):
        _, gen = entropic
        concave = solve_lsmc(ensemble, brownian_terminal, gen)
        standard = standard_form_solve(ensemble, brownian_terminal, to_standard_form(gen))

        assert standard.Y == pytest.approx(concave.Y)
        assert standard.Z == pytest.approx(-concave.Z)

    def test_clipping_makes_solution_unacceptable(self, ensemble, entropic):
        _, gen = entropic
        solution = solve_lsmc(ensemble, brownian_terminal, gen, clip_radius=0.5)

        assert solution.clip_count > 0
        assert not solution.acceptable

    def test_constant_endowment(self, ensemble, entropic):
        _, gen = entropic
        assert solve_lsmc(ensemble, 3.0, gen).Y0 == pytest.approx(3.0)

    def test_wrong_endowment_length(self, ensemble, entropic):
        _, gen = entropic
        with pytest.raises(InputError):
            solve_lsmc(ensemble, np.zeros(10), gen)

    def test_dimension_mismatch(self, ensemble):
        _, gen = build_catalogue_entry("entropic", GrowthParams(dimension=2))
        with pytest.raises(ParamError):
            solve_lsmc(ensemble, brownian_terminal, gen)

    def test_unknown_scheme(self, ensemble, entropic):
        _, gen = entropic
        with pytest.raises(ParamError):
            solve_lsmc(ensemble, brownian_terminal, gen, scheme="picard")

    def test_export_rows(self, ensemble, entropic, tmp_path):
        _, gen = entropic
        solution = solve_lsmc(ensemble, brownian_terminal, gen, basis_spec=BasisSpec(degree=2))
        lines = solution.export_csv(tmp_path / "solution.csv").read_text(encoding="utf-8").splitlines()

        assert lines[0] == "step,t,Y0_regression_value,Z0,R2,clip_count"
        assert len(lines) == 1 + ensemble.steps + 1


class TestTimeConsistency:
    """Тесты двухэтапного решения"""

    def test_split_must_be_node(self, ensemble):
        with pytest.raises(ParamError):
            split_step(ensemble, 0.3)
        assert split_step(ensemble, 0.5) == 8

    def test_two_stage_agrees(self, ensemble, entropic):
        _, gen = entropic
        direct, nested = two_stage_solve(ensemble, brownian_terminal, gen, 0.5)

        assert nested == pytest.approx(direct, abs=0.03)

    def test_two_stage_tail_runs_on_own_paths(self, ensemble, entropic):
        _, gen = entropic
        first = two_stage_solve(ensemble, brownian_terminal, gen, 0.5,
                                tail_ensemble=generate(20000, 16, 1, 1.0, seed=5))
        second = two_stage_solve(ensemble, brownian_terminal, gen, 0.5,
                                 tail_ensemble=generate(20000, 16, 1, 1.0, seed=6))

        assert first[0] == second[0]
        assert first[1] != second[1]
        assert first[1] == pytest.approx(-0.5, abs=0.03)

    def test_two_stage_needs_state_function(self, ensemble, entropic):
        _, gen = entropic
        with pytest.raises(InputError):
            two_stage_solve(ensemble, np.zeros(ensemble.paths), gen, 0.5)

    def test_two_stage_tail_grid_mismatch(self, ensemble, entropic):
        _, gen = entropic
        with pytest.raises(ParamError):
            two_stage_solve(ensemble, brownian_terminal, gen, 0.5,
                            tail_ensemble=generate(1000, 8, 1, 1.0, seed=5))


class TestOracles:
    """Тесты оракулов"""

    def test_entropic_constant(self):
        assert entropic_oracle(np.full(10, 2.0), 3.0) == pytest.approx(2.0)

    def test_entropic_interval_contains_value(self):
        xi = np.random.default_rng(2).normal(size=5000)
        value, lo, hi = entropic_oracle_ci(xi, 1.0)
        assert lo < value < hi

    def test_unknown_affine_tag(self):
        with pytest.raises(OracleError):
            affine_oracle("quartic", 1.0, 0.0, 0.0, 1.0)

    def test_affine_fit(self):
        level = np.linspace(-2.0, 2.0, 11)
        assert affine_fit(level, 3.0 * level - 1.0) == pytest.approx((3.0, -1.0))
        assert affine_fit(level, level ** 2) is None

    def test_catalogue_oracle_dispatch(self):
        level = np.linspace(-2.0, 2.0, 11)
        core, _ = build_catalogue_entry("drift_band", GrowthParams(gamma=0.5))
        quartic, _ = build_catalogue_entry("quartic")

        assert catalogue_oracle(core, 2.0 * level, level, 1.0) == pytest.approx(-1.0)
        assert catalogue_oracle(quartic, level, level, 1.0) is None
