import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dualevo.fields import (
    AmplitudeField,
    DegenerateFieldError,
    DiscreteDistribution,
    Grid1D,
    ProbabilityField,
    cell_masses,
    distance,
    moment,
    normalize,
    read_field_csv,
    sample_positions,
    trapezoid,
    variance,
    write_field_csv,
)


def gaussian(grid, mean=0.0, var=1.0):
    x = grid.points
    return ProbabilityField(grid, np.exp(-((x - mean) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var))


class TestGrid:
    def test_points_and_spacing(self):
        g = Grid1D(-1.0, 1.0, 5)
        assert g.dx == 0.5
        np.testing.assert_array_equal(g.points, [-1.0, -0.5, 0.0, 0.5, 1.0])
        np.testing.assert_array_equal(g.weights, [0.25, 0.5, 0.5, 0.5, 0.25])

    @pytest.mark.parametrize("args", [(0, 1, 2), (1, 0, 10), (0, 0, 10), (0, float("inf"), 10), (0, 1, 3.5)])
    def test_rejects_bad_grids(self, args):
        with pytest.raises(ValueError):
            Grid1D(*args)

    def test_from_points_rejects_non_uniform(self):
        with pytest.raises(ValueError, match="uniform"):
            Grid1D.from_points([0.0, 0.1, 0.3, 0.4])
        assert Grid1D.from_points(np.linspace(0, 1, 11)) == Grid1D(0.0, 1.0, 11)

    def test_symmetric_has_node_at_zero(self):
        g = Grid1D.symmetric(3.0, 0.1)
        assert g.n % 2 == 1
        assert g.points[g.n // 2] == pytest.approx(0.0, abs=1e-15)


class TestNormalize:
    def test_uniform_unit_interval(self):
        g = Grid1D(0.0, 1.0, 101)
        f = normalize(ProbabilityField(g, np.full(101, 7.0)))
        np.testing.assert_allclose(f.values, 1.0, rtol=1e-15)

    def test_gaussian_amplitude(self):
        # exp(-x^2/2) normalized in |psi|^2 is pi^(-1/4) exp(-x^2/2)
        g = Grid1D.symmetric(12.0, 0.01)
        psi = normalize(AmplitudeField(g, np.exp(-g.points**2 / 2)))
        assert psi.norm2() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(psi.values.real, math.pi**-0.25 * np.exp(-g.points**2 / 2), atol=1e-12)

    def test_zero_field_is_degenerate(self):
        g = Grid1D(0, 1, 11)
        with pytest.raises(DegenerateFieldError, match="degenerate field"):
            normalize(ProbabilityField(g, np.zeros(11)))
        with pytest.raises(DegenerateFieldError, match="degenerate field"):
            normalize(AmplitudeField(g, np.zeros(11)))

    def test_overflowing_integral_is_degenerate(self):
        g = Grid1D(0, 1, 11)
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(DegenerateFieldError, match="degenerate field"):
                normalize(ProbabilityField(g, np.full(11, 1e308)))

    @settings(max_examples=50, deadline=None)
    @given(arrays(float, 17, elements=st.floats(0.0, 1e3)).filter(lambda a: a.sum() > 1e-3))
    def test_idempotent(self, vals):
        g = Grid1D(-2.0, 2.0, 17)
        once = normalize(ProbabilityField(g, vals))
        twice = normalize(once)
        np.testing.assert_allclose(twice.values, once.values, rtol=1e-15, atol=0)
        assert moment(once, 0) == pytest.approx(1.0, abs=1e-10)


class TestMoments:
    def test_symmetric_first_moment(self):
        g = Grid1D.symmetric(10.0, 0.05)
        assert abs(moment(gaussian(g), 1)) < 1e-10

    @pytest.mark.parametrize("var", [0.25, 1.0, 2.5])
    def test_second_moment(self, var):
        g = Grid1D.symmetric(20.0, 0.01)
        assert moment(gaussian(g, var=var), 2) == pytest.approx(var, rel=1e-8)
        assert variance(gaussian(g, mean=1.0, var=var)) == pytest.approx(var, rel=1e-8)

    def test_narrow_gaussian_mass(self):
        g = Grid1D.symmetric(1.0, 1e-4)
        assert moment(gaussian(g, var=1e-5), 0) == pytest.approx(1.0, abs=1e-10)

    def test_rejects_bad_order(self):
        g = Grid1D(0, 1, 5)
        with pytest.raises(ValueError):
            moment(ProbabilityField(g, np.ones(5)), -1)


class TestDistance:
    def test_identity_and_disjoint(self):
        g = Grid1D.symmetric(5.0, 0.1)
        f = gaussian(g)
        for metric in ("Linf", "L1", "TV"):
            assert distance(f, f, metric) == 0.0
        a, b = DiscreteDistribution([1.0, 0.0]), DiscreteDistribution([0.0, 1.0])
        assert distance(a, b, "TV") == 1.0
        assert distance(a, b, "L1") == 2.0

    def test_shifted_gaussians_linf(self):
        # oracle: dense evaluation of the closed-form difference
        delta = 0.3
        g = Grid1D.symmetric(8.0, 0.01)
        xs = np.linspace(-8, 8, 160_001)
        dense = np.max(np.abs(np.exp(-xs**2 / 2) - np.exp(-((xs - delta) ** 2) / 2))) / math.sqrt(2 * math.pi)
        assert distance(gaussian(g), gaussian(g, mean=delta), "Linf") == pytest.approx(dense, rel=1e-4)

    def test_grid_mismatch(self):
        with pytest.raises(ValueError, match="grid mismatch"):
            distance(gaussian(Grid1D(0, 1, 11)), gaussian(Grid1D(0, 1, 12)))
        with pytest.raises(ValueError):
            distance(DiscreteDistribution([1.0]), DiscreteDistribution([0.5, 0.5]))

    @settings(max_examples=50, deadline=None)
    @given(
        arrays(float, 9, elements=st.floats(0.0, 10.0)),
        arrays(float, 9, elements=st.floats(0.0, 10.0)),
        st.sampled_from(["Linf", "L1", "TV"]),
    )
    def test_symmetric_and_zero_iff_equal(self, a, b, metric):
        g = Grid1D(0.0, 1.0, 9)
        f, h = ProbabilityField(g, a), ProbabilityField(g, b)
        assert distance(f, h, metric) == distance(h, f, metric)
        assert (distance(f, h, metric) == 0.0) == bool(np.array_equal(a, b))


class TestDistributions:
    def test_sum_check(self):
        DiscreteDistribution([0.25, 0.75])
        with pytest.raises(ValueError):
            DiscreteDistribution([0.5, 0.6])
        with pytest.raises(ValueError):
            DiscreteDistribution([1.5, -0.5])

    def test_negative_density_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            ProbabilityField(Grid1D(0, 1, 3), [0.1, -0.1, 0.1])

    def test_values_are_read_only(self):
        f = gaussian(Grid1D(0, 1, 5))
        with pytest.raises(ValueError):
            f.values[0] = 1.0


class TestSampling:
    def test_cell_masses_sum_to_total(self):
        f = gaussian(Grid1D.symmetric(6.0, 0.1))
        assert cell_masses(f).sum() == pytest.approx(f.total(), rel=1e-14)
        assert trapezoid(f.values, f.grid) == pytest.approx(f.total(), rel=1e-15)

    def test_inverse_cdf_uniform_density(self):
        g = Grid1D(2.0, 4.0, 21)
        f = ProbabilityField(g, np.full(21, 0.5))
        u = np.array([0.0, 0.25, 0.5, 0.999])
        np.testing.assert_allclose(sample_positions(f, u), 2.0 + 2.0 * u, atol=1e-13)

    def test_inverse_cdf_skips_empty_cells(self):
        g = Grid1D(0.0, 4.0, 5)
        f = ProbabilityField(g, [0.0, 0.0, 1.0, 0.0, 0.0])
        x = sample_positions(f, np.linspace(0, 0.999, 200))
        assert np.all((x >= 1.0) & (x <= 3.0))


def test_csv_round_trip(tmp_path):
    g = Grid1D.symmetric(3.0, 0.1)
    f = gaussian(g, mean=0.1234567890123, var=0.7)
    psi = AmplitudeField(g, np.exp(1j * g.points) * f.values)
    write_field_csv(f, tmp_path / "f.csv")
    write_field_csv(psi, tmp_path / "psi.csv")
    assert (tmp_path / "f.csv").read_text().splitlines()[0] == "x,value"
    assert (tmp_path / "psi.csv").read_text().splitlines()[0] == "x,re,im"
    back = read_field_csv(tmp_path / "f.csv")
    np.testing.assert_array_equal(back.values, f.values)
    np.testing.assert_array_equal(read_field_csv(tmp_path / "psi.csv").values, psi.values)
