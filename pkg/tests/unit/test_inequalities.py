"""
Unit тесты неравенств Юнга и оценок для плотностей
"""
import math

import numpy as np
import pytest

from inequalities.constants import gauss_constant, kbar, ktilde, threshold
from inequalities.pointwise import REPORT_COLUMNS, check_pointwise, write_report_csv
from inequalities.specs import (
    POINTWISE_IDS, STOCHASTIC_IDS, ConstantSource, draw_parameters, make_spec, sample_points,
)
from inequalities.stochastic import mc_bound_check
from paths.ensemble import generate
from utils.errors import ParamError, RejectedControl


@pytest.fixture(scope="module")
def ensemble():
    return generate(20000, 16, 1, 1.0, seed=5)


class TestSpecs:
    """Тесты описаний неравенств"""

    def test_registry_partition(self):
        assert len(POINTWISE_IDS) == 11
        assert set(STOCHASTIC_IDS) == {"density_entropy", "density_log_power", "density_exp_log"}

    def test_defaults(self):
        spec = make_spec("young_exp_power_eps")

        assert spec.parameters == {"mu": 1.0, "delta": 2.0, "q": 2.0, "eps": 0.1}
        assert spec.constant_source is ConstantSource.THRESHOLD_SEARCH
        assert spec.describe_params() == "delta=2;eps=0.10000000000000001;mu=1;q=2"

    def test_unknown_ident(self):
        with pytest.raises(ParamError, match="young_unknown"):
            make_spec("young_unknown")

    def test_extra_parameter(self):
        with pytest.raises(ParamError):
            make_spec("young_classic", {"mu": 1.0})

    def test_invalid_parameters(self):
        with pytest.raises(ParamError):
            make_spec("young_power", {"delta": 1.0})
        with pytest.raises(ParamError):
            make_spec("young_exp_gauss", {"q": 1.0})
        with pytest.raises(ParamError):
            make_spec("young_exp_linear", {"mu": 0.0})

    def test_draws_are_deterministic(self):
        first = draw_parameters("young_exp_log_eps", count=5, seed=11)
        second = draw_parameters("young_exp_log_eps", count=5, seed=11)

        assert [s.parameters for s in first] == [s.parameters for s in second]
        assert all(1.5 <= s.param("delta") <= 4.0 for s in first)
        assert all(1.1 <= s.param("q") <= 4.0 for s in first)

    def test_sample_domain(self):
        x, y = sample_points(make_spec("young_classic"), 10000, seed=2)

        assert np.count_nonzero(x == 0.0) >= 100
        assert np.all(x >= 0.0) and np.all(y >= 0.0)

        x, y = sample_points(make_spec("fenchel_exp"), 10000, seed=2)
        assert np.any(x < 0.0)
        assert np.all(y > 0.0)


class TestConstants:
    """Тесты явных констант"""

    def test_gauss_constant(self):
        expected = math.exp(0.5 + 3.0 * math.log(2.0) ** 2)
        assert gauss_constant(1.0, 2.0) == pytest.approx(expected)

    def test_power_threshold(self):
        eps, q = 0.1, 2.0
        u_k, log_c = threshold("power", q, eps, 1.0, 2.0)

        assert math.log(eps) + (q - 1.0) * math.exp(2.0 * u_k) - u_k == pytest.approx(0.0, abs=1e-8)
        assert log_c == pytest.approx(u_k + math.exp(2.0 * u_k))
        beyond = np.exp(np.linspace(u_k + 1e-6, u_k + 3.0, 50))
        assert np.all(beyond <= eps * np.exp((q - 1.0) * beyond ** 2))

    def test_threshold_absent(self):
        u_k, log_c = threshold("power", 2.0, 1e6, 1.0, 2.0)
        assert u_k == -math.inf and log_c == -math.inf

    def test_ktilde_ladder(self):
        k = ktilde(1.0, 1.0)
        rung = math.log2(k / math.e)

        assert rung == pytest.approx(round(rung))
        assert k >= math.e

    def test_kbar_nonnegative(self):
        assert kbar(1.0, 1.0) >= 0.0


class TestPointwise:
    """Тесты поточечных проверок"""

    @pytest.mark.parametrize("ident", POINTWISE_IDS)
    def test_defaults_hold(self, ident):
        report = check_pointwise(make_spec(ident), samples=20000, seed=3)

        assert report.passed, report.examples
        assert report.worst_margin >= -1e-9

    @pytest.mark.parametrize("ident", ["young_exp_power", "young_exp_log_eps", "young_power"])
    def test_random_parameters_hold(self, ident):
        for j, spec in enumerate(draw_parameters(ident, count=3, seed=7)):
            assert check_pointwise(spec, samples=5000, seed=j).passed

    def test_stochastic_spec_rejected(self):
        with pytest.raises(ParamError):
            check_pointwise(make_spec("density_entropy"), samples=10)

    def test_report_csv(self, tmp_path):
        report = check_pointwise(make_spec("young_classic"), samples=100)
        lines = write_report_csv([report.row()], tmp_path / "ineq.csv").read_text(
            encoding="utf-8").splitlines()

        assert lines[0] == ",".join(REPORT_COLUMNS)
        assert lines[1].startswith("young_classic,delta=2,100,0,")


class TestStochastic:
    """Тесты оценок для стохастических экспонент"""

    def test_entropy_equality_at_zero(self, ensemble):
        report = mc_bound_check(make_spec("density_entropy"), ensemble, 0.0)

        assert report.equality
        assert report.holds
        assert report.lhs == pytest.approx(math.log(2.0))
        assert report.rhs == pytest.approx(math.log(2.0))

    def test_entropy_with_control(self, ensemble):
        report = mc_bound_check(make_spec("density_entropy"), ensemble, 1.0)

        assert report.holds
        assert not report.equality
        assert report.quadrature == pytest.approx(report.lhs, abs=5.0 * report.lhs_std_error + 1e-3)

    def test_log_power(self, ensemble):
        report = mc_bound_check(make_spec("density_log_power"), ensemble, 1.0)
        assert report.holds

    def test_exp_log_intermediate(self, ensemble):
        report = mc_bound_check(make_spec("density_exp_log"), ensemble, 1.0)

        assert report.holds
        assert report.intermediate is not None

    def test_unbounded_control_rejected(self, ensemble):
        with pytest.raises(RejectedControl):
            mc_bound_check(make_spec("density_entropy"), ensemble, 5e3)

    def test_nonfinite_control_rejected(self, ensemble):
        with pytest.raises(RejectedControl):
            mc_bound_check(make_spec("density_entropy"), ensemble, float("nan"))

    def test_pointwise_spec_rejected(self, ensemble):
        with pytest.raises(ParamError):
            mc_bound_check(make_spec("young_classic"), ensemble, 0.0)
