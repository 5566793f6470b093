"""
Unit тесты численного сопряжения
"""
import numpy as np
import pytest

from conjugate.legendre import (
    biconjugate_check, conjugation_report, fenchel_young_gap, legendre_transform,
    numeric_generator, tabulate_core,
)
from conjugate.subgradient import subgradient
from conjugate.tabulated import (
    TabulatedConvexFunction, core_from_table, load_tabulated_csv, save_tabulated_csv,
)
from model.catalogue import build_catalogue_entry
from model.growth import GrowthParams
from utils.errors import DomainError, GridError, RangeError

Q_GRID = np.linspace(-12.0, 12.0, 4801)


class TestTabulated:
    """Тесты табличных функций"""

    def test_grid_must_increase(self):
        with pytest.raises(GridError):
            TabulatedConvexFunction(grid=[0.0, 2.0, 1.0], values=[0.0, 1.0, 2.0])

    def test_empty_domain(self):
        with pytest.raises(DomainError):
            TabulatedConvexFunction(grid=[0.0, 1.0, 2.0], values=[np.inf, np.inf, np.inf])

    def test_out_of_range(self):
        table = TabulatedConvexFunction(grid=[0.0, 1.0, 2.0], values=[1.0, 0.0, 1.0])
        assert table(0.5) == pytest.approx(0.5)
        with pytest.raises(RangeError):
            table(3.0)

    def test_hull_repair(self):
        table = TabulatedConvexFunction(grid=[-1.0, 0.0, 1.0, 2.0], values=[1.0, 2.0, 1.0, 4.0])
        repaired, deviation = table.repaired()

        assert deviation == pytest.approx(1.0)
        assert repaired.values[1] == pytest.approx(1.0)

    def test_csv_inf_tokens(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("grid,value\n-1,+inf\n0,0\n1,0.5\n2,2\n", encoding="utf-8")
        table = load_tabulated_csv(path)

        assert np.isposinf(table.values[0])
        save_tabulated_csv(table, tmp_path / "copy.csv")
        assert "+inf" in (tmp_path / "copy.csv").read_text(encoding="utf-8")

    def test_core_from_table_outside_is_infinite(self):
        table = TabulatedConvexFunction(grid=np.linspace(-2.0, 2.0, 81),
                                        values=0.5 * np.linspace(-2.0, 2.0, 81) ** 2)
        core = core_from_table(table, "A4", GrowthParams(gamma=2.0))

        assert core(0.0, 1.0) == pytest.approx(0.5, abs=1e-3)
        assert core(0.0, 3.0) == np.inf


class TestLegendre:
    """Тесты преобразования Лежандра"""

    def test_quadratic_is_self_conjugate(self):
        core, _ = build_catalogue_entry("entropic")
        g = legendre_transform(tabulate_core(core, Q_GRID), np.linspace(-3.0, 3.0, 61))

        assert g.values == pytest.approx(0.5 * g.grid ** 2, abs=1e-4)
        assert not g.extrapolated.any()

    def test_exponential_core_below_printed_formula(self):
        q = np.linspace(-6.0, 6.0, 100001)
        table = TabulatedConvexFunction(grid=q, values=np.exp(np.abs(q)))
        g = legendre_transform(table, [0.5])

        assert g.values[0] == pytest.approx(-1.0, abs=1e-6)

    def test_edge_argmax_flagged(self):
        core, _ = build_catalogue_entry("entropic")
        g = legendre_transform(tabulate_core(core, np.linspace(-2.0, 2.0, 401)), [0.0, 1.0, 5.0])

        assert list(g.extrapolated) == [False, False, True]

    def test_biconjugate(self):
        core, _ = build_catalogue_entry("quartic")
        report = biconjugate_check(core, np.linspace(-3.0, 3.0, 601), Q_GRID)

        assert report.passed
        assert report.points > 0

    def test_fenchel_young(self):
        core, gen = build_catalogue_entry("entropic", GrowthParams(gamma=2.0))

        assert fenchel_young_gap(core, gen, 0.0, 2.0, 1.0) == pytest.approx(0.0, abs=1e-12)
        assert fenchel_young_gap(core, gen, 0.0, 0.0, 1.0) > 0.0

    def test_numeric_generator_matches_closed_form(self):
        core, gen = build_catalogue_entry("piecewise_vii")
        numeric = numeric_generator(core, Q_GRID)
        z = np.array([-1.0, 0.5, 3.0])

        assert numeric(0.0, z) == pytest.approx(gen(0.0, z), abs=1e-4)
        assert numeric.selector(0.0, np.array([3.0]))[0, 0] == pytest.approx(6.0, abs=1e-2)

    def test_numeric_generator_radial(self):
        core, gen = build_catalogue_entry("entropic", GrowthParams(dimension=2))
        numeric = numeric_generator(core, Q_GRID)
        z = np.array([[1.0, 1.0], [0.0, -2.0]])

        assert numeric(0.0, z) == pytest.approx(gen(0.0, z), abs=1e-4)

    def test_subgradient_of_table(self):
        table = TabulatedConvexFunction(grid=[-1.0, 0.0, 1.0], values=[1.0, 0.0, 1.0])
        subdiff, chosen = subgradient(table, 0.0, 0.0)

        assert (subdiff.lower, subdiff.upper) == (-1.0, 1.0)
        assert chosen == pytest.approx([0.0])


class TestConjugationReport:
    """Тесты отчета сопряжения каталога"""

    def test_smooth_entries_match(self):
        rows = conjugation_report(["entropic", "quartic", "drift_band"])
        assert all(row.passed for row in rows)

    def test_exponential_discrepancy_is_documented(self):
        row, = conjugation_report(["exponential"])

        assert row.mismatches == 0
        assert row.documented_mismatches > 0
        assert -1.0 < row.discrepancy_lo and row.discrepancy_hi < 1.0
