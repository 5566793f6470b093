"""
Unit тесты ансамблей траекторий и плотностей
"""
import numpy as np
import pytest

from paths.density import control_array, stochastic_exponential
from paths.ensemble import dump_paths_csv, forward_sde, generate, independent_ensemble
from paths.quadrature import gaussian_expectation, lognormal_expectation
from paths.spaces import SpaceDescriptor, space_statistic
from utils.errors import BlowupError, CapacityError, InputError, ParamError


class TestEnsemble:
    """Тесты генерации ансамбля"""

    def test_thread_count_does_not_change_paths(self):
        one = generate(1000, 8, 2, 1.0, seed=5, threads=1)
        four = generate(1000, 8, 2, 1.0, seed=5, threads=4)

        assert np.array_equal(one.increments, four.increments)

    def test_prefix_independent_of_path_count(self):
        small = generate(100, 4, 1, 1.0, seed=9)
        large = generate(700, 4, 1, 1.0, seed=9)

        assert np.array_equal(small.increments, large.increments[:100])
        assert np.array_equal(large.subset(100).increments, small.increments)

    def test_seed_changes_paths(self):
        a = generate(50, 4, 1, 1.0, seed=1)
        b = generate(50, 4, 1, 1.0, seed=2)
        assert not np.array_equal(a.increments, b.increments)

    def test_independent_ensemble_uses_next_seed(self):
        ens = generate(50, 4, 1, 1.0, seed=1)
        other = independent_ensemble(ens)

        assert other.seed == 2
        assert np.array_equal(other.increments, generate(50, 4, 1, 1.0, seed=2).increments)

    def test_independent_ensemble_rejects_state(self):
        ens = forward_sde(generate(10, 4, 1, 1.0, seed=7), lambda t, x: 0.0, lambda t, x: 1.0, 0.0)
        with pytest.raises(ParamError):
            independent_ensemble(ens)

    def test_increment_variance(self):
        ens = generate(40000, 4, 1, 2.0, seed=3)
        assert ens.increments.var() == pytest.approx(ens.dt, rel=0.03)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            generate(100, 10, 1, 1.0, seed=0, settings={"paths": {"max_elements": 10}})

    def test_invalid_sizes(self):
        with pytest.raises(ParamError):
            generate(0, 10, 1, 1.0, seed=0)

    def test_brownian_and_truncate(self):
        ens = generate(20, 8, 1, 1.0, seed=4)
        b = ens.brownian()

        assert b.shape == (20, 9, 1)
        assert np.all(b[:, 0, :] == 0.0)
        short = ens.truncate(4)
        assert short.horizon == pytest.approx(0.5)
        assert np.array_equal(short.brownian(), b[:, :5, :])

    def test_dump_paths(self, tmp_path):
        ens = generate(3, 2, 1, 1.0, seed=4)
        path = dump_paths_csv(ens, tmp_path / "paths.csv", max_paths=2)
        lines = path.read_text(encoding="utf-8").splitlines()

        assert lines[0] == "path_id,step,B1,X"
        assert len(lines) == 1 + 2 * 3


class TestForwardSde:
    """Тесты прямых процессов"""

    def test_gbm_exact_mean(self):
        ens = generate(20000, 16, 1, 1.0, seed=7)
        gbm = forward_sde(ens, None, None, 1.0, scheme="gbm_exact", gbm=(0.05, 0.2))

        assert gbm.terminal_state().mean() == pytest.approx(np.exp(0.05), abs=0.01)
        assert np.all(gbm.state[:, 0] == 1.0)

    def test_euler_matches_brownian_for_unit_vol(self):
        ens = generate(10, 4, 1, 1.0, seed=7)
        out = forward_sde(ens, lambda t, x: 0.0, lambda t, x: 1.0, 0.0)

        assert out.state == pytest.approx(ens.brownian()[:, :, 0])

    def test_blowup_reports_step(self):
        ens = generate(10, 4, 1, 1.0, seed=7)
        with pytest.raises(BlowupError) as excinfo:
            forward_sde(ens, lambda t, x: x ** 2, lambda t, x: 0.0, 1e200)
        assert excinfo.value.step == 1


class TestDensity:
    """Тесты стохастических экспонент"""

    def test_martingale_mean(self):
        ens = generate(50000, 16, 1, 1.0, seed=11)
        density = stochastic_exponential(ens, 1.0)
        mean, se = density.martingale_diagnostic()

        assert abs(mean - 1.0) <= 4.0 * se
        assert density.log_values[:, 0] == pytest.approx(0.0)

    def test_zero_control_is_one(self):
        ens = generate(100, 4, 2, 1.0, seed=11)
        assert np.all(stochastic_exponential(ens, 0.0).terminal == 1.0)

    def test_callable_control(self):
        ens = generate(100, 4, 1, 1.0, seed=11)
        q = control_array(ens, lambda t, x: np.sign(x))

        assert q.shape == (100, 4, 1)
        assert np.all(q[:, 0, 0] == 0.0)

    def test_wrong_shape(self):
        ens = generate(100, 4, 1, 1.0, seed=11)
        with pytest.raises(InputError):
            control_array(ens, np.zeros((100, 3, 1)))


class TestSpacesAndQuadrature:
    """Тесты статистик пространств и квадратур"""

    def test_exp_family_vanishes_at_zero(self):
        assert space_statistic(np.zeros(10), SpaceDescriptor("expMuLp", mu=1.0, p=2.0)) == 0.0

    def test_llnl_statistic(self):
        value = space_statistic([1.0, -1.0], SpaceDescriptor("LlnLp", p=1.0))
        assert value == pytest.approx(np.log(2.0))

    def test_unknown_family(self):
        with pytest.raises(InputError):
            SpaceDescriptor("Lp")

    def test_overflow_is_infinite(self):
        assert space_statistic([1e3], SpaceDescriptor("expMuLp", mu=1.0, p=2.0)) == np.inf

    def test_quadrature_moments(self):
        assert gaussian_expectation(lambda x: x ** 2) == pytest.approx(1.0, abs=1e-10)
        assert lognormal_expectation(lambda l: l, q=1.5) == pytest.approx(1.0, abs=1e-8)
