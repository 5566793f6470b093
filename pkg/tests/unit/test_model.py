"""
Unit тесты каталога функций штрафа и оценок роста
"""
import numpy as np
import pytest

from model.catalogue import CATALOGUE_TAGS, build_catalogue_entry
from model.functions import INF, Subdifferential
from model.growth import GrowthParams, a3_constant, check_growth, compute_hbar, sample_convexity
from utils.errors import CatalogueError, ParamError


class TestCatalogue:
    """Тесты каталога примеров"""

    def test_entropic_pair(self):
        core, gen = build_catalogue_entry("entropic", GrowthParams(gamma=2.0))

        assert core(0.0, 1.0) == pytest.approx(0.25)
        assert gen(0.0, 1.0) == pytest.approx(1.0)
        assert gen.selector(0.0, np.array([0.5, -1.0])).ravel() == pytest.approx([1.0, -2.0])

    def test_unknown_tag(self):
        with pytest.raises(CatalogueError) as excinfo:
            build_catalogue_entry("hyperbolic")
        assert "hyperbolic" in str(excinfo.value)

    def test_negative_offset_rejected(self):
        with pytest.raises(ParamError):
            build_catalogue_entry("entropic", h=-1.0)

    def test_linear_dirac_anchor_outside_band(self):
        with pytest.raises(ParamError):
            build_catalogue_entry("linear_dirac", GrowthParams(gamma=1.0), qbar=2.0)

    def test_linear_dirac_values(self):
        core, gen = build_catalogue_entry("linear_dirac", h=0.2, qbar=0.5)

        assert core(0.0, 0.5) == pytest.approx(0.2)
        assert core(0.0, 0.0) == INF
        assert gen(0.0, 2.0) == pytest.approx(0.8)
        assert gen.subdifferential(0.0, 3.0).contains(0.5)

    def test_drift_band_subdifferential_at_zero(self):
        _, gen = build_catalogue_entry("drift_band", GrowthParams(gamma=0.5))
        sub = gen.subdifferential(0.0, 0.0)

        assert sub.kind == "ball"
        assert sub.contains(0.5)
        assert not sub.contains(0.6)
        assert gen(0.0, -2.0) == pytest.approx(1.0)

    def test_piecewise_vii_kink(self):
        _, gen = build_catalogue_entry("piecewise_vii")
        sub = gen.subdifferential(0.0, 1.0)

        assert sub.kind == "interval"
        assert (sub.lower, sub.upper) == (1.0, 2.0)
        assert gen(0.0, 0.5) == pytest.approx(0.5)
        assert gen(0.0, 3.0) == pytest.approx(9.0)

    def test_piecewise_vii_requires_one_dimension(self):
        with pytest.raises(ParamError):
            build_catalogue_entry("piecewise_vii", GrowthParams(dimension=2))

    def test_exponential_solves_true_conjugate(self):
        core, gen = build_catalogue_entry("exponential")

        assert gen.known_discrepancy == (-1.0, 1.0)
        assert gen(0.0, np.e) == pytest.approx(0.0, abs=1e-12)
        assert gen(0.0, 0.5) == pytest.approx(-1.0)
        assert gen(0.0, -0.2) == pytest.approx(-core(0.0, 0.0))
        assert gen.printed_func(0.0, np.array([[0.5]]))[0] == pytest.approx(0.5 * (np.log(0.5) - 1.0))

    @pytest.mark.parametrize("tag", CATALOGUE_TAGS)
    def test_every_tag_builds(self, tag):
        core, gen = build_catalogue_entry(tag)

        assert core.catalogue_tag == tag
        assert gen.catalogue_tag == tag
        assert np.isfinite(gen(0.0, np.linspace(-3.0, 3.0, 13))).all()


class TestGrowth:
    """Тесты сертификации оценок роста"""

    def test_unknown_override(self):
        with pytest.raises(ParamError):
            GrowthParams().with_overrides(beta=1.0)

    def test_alpha_star_recomputed(self):
        params = GrowthParams(alpha=1.5).with_overrides(alpha=4.0 / 3.0)
        assert params.alpha_star == pytest.approx(4.0)

    def test_entropic_certified(self):
        core, gen = build_catalogue_entry("entropic")

        assert check_growth(core).certified
        assert check_growth(gen).certified

    def test_piecewise_vii_a1_defect_reported(self):
        core, _ = build_catalogue_entry("piecewise_vii")
        report = check_growth(core)

        assert not report.certified
        assert "A1" in report.conditions()
        assert report.worst_excess <= 0.25 + 1e-9

    def test_drift_band_domain(self):
        core, _ = build_catalogue_entry("drift_band", GrowthParams(gamma=1.0))
        report = check_growth(core)

        assert report.certified

    def test_convexity_sampled(self):
        for tag in ("entropic", "quartic", "capped_quadratic"):
            core, gen = build_catalogue_entry(tag)
            assert sample_convexity(core, samples=1000, seed=3).passed
            assert sample_convexity(gen, samples=1000, seed=3).passed

    def test_hbar_a1(self):
        core, _ = build_catalogue_entry("linear_dirac", GrowthParams(gamma=1.0), h=0.1, qbar=0.5)
        assert compute_hbar(core)(0.0) == pytest.approx(0.1)

    def test_hbar_entropic(self):
        core, _ = build_catalogue_entry("entropic", GrowthParams(gamma=2.0, k=1.0))
        assert compute_hbar(core)(0.0) == pytest.approx(0.25)

    def test_a3_constant_matches_closed_conjugate(self):
        # φ(r) = 0.01·e^{2r}: φ*(s) = (s/2)(ln(50 s) − 1) при s ≥ 0.02, иначе −0.01
        s = np.linspace(0.0, 50.0, 4001)
        with np.errstate(divide="ignore", invalid="ignore"):
            conj = np.where(s >= 0.02, 0.5 * s * (np.log(50.0 * s) - 1.0), -0.01)
        expected = 2.0 * max(0.0, float(np.max(conj - s * np.log1p(s))))

        assert expected > 1.0
        assert a3_constant(0.01, 1.0, 1.0) == pytest.approx(expected, abs=1e-2)

    def test_a3_constant_vanishes_for_exponential_entry(self):
        assert a3_constant(1.0, 2.0, 1.0) == 0.0


class TestSubdifferential:
    """Тесты множеств субградиентов"""

    def test_interval_min_norm(self):
        assert Subdifferential.interval(1.0, 2.0).min_norm() == pytest.approx([1.0])
        assert Subdifferential.interval(-1.0, 2.0).min_norm() == pytest.approx([0.0])

    def test_ball_min_norm(self):
        sub = Subdifferential.ball([3.0, 4.0], 1.0)
        assert sub.min_norm() == pytest.approx([2.4, 3.2])

    def test_degenerate_interval_is_point(self):
        assert Subdifferential.interval(1.0, 1.0).kind == "point"
