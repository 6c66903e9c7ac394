import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualevo.fields import AmplitudeField, DiscreteDistribution, Grid1D, distance, variance, write_field_csv
from dualevo.schrodinger import (
    CrankNicolson,
    GaussianPacket,
    HarmonicGroundState,
    IncompatibleOutcomeError,
    NormDriftError,
    QuantumParams,
    apply_hamiltonian,
    born_probability,
    collapse,
    energy_expectation,
    free_density,
    gamma_of_t,
    harmonic_ground_state,
    measurement_trajectory,
    packet_field,
    propagate_cn,
)
from dualevo.stats import chi_square_against

FREE = QuantumParams()
HO = QuantumParams(hbar=1.0, m=1.0, b=1.0)


class TestParams:
    def test_validation(self):
        for kw in ({"hbar": 0.0}, {"m": -1.0}, {"b": -0.1}):
            with pytest.raises(ValueError):
                QuantumParams(**kw)
        with pytest.raises(ValueError):
            GaussianPacket(alpha=0.0)

    def test_ground_state_consistency_is_enforced(self):
        HarmonicGroundState(lambda_=2.0, E0=1.5, params=HO)
        with pytest.raises(ValueError):
            HarmonicGroundState(lambda_=2.0, E0=1.4, params=HO)


class TestSpreadLaw:
    @pytest.mark.parametrize(
        "alpha,hbar,m,t,expected",
        [(1, 1, 1, 0, 1.0), (1, 1, 1, 1, 0.5), (2, 1, 2, 4, 0.25)],
    )
    def test_values(self, alpha, hbar, m, t, expected):
        assert gamma_of_t(alpha, t, QuantumParams(hbar=hbar, m=m)) == pytest.approx(expected, rel=1e-15)

    @given(st.floats(0.1, 10.0), st.floats(0.0, 50.0), st.floats(1e-3, 5.0))
    def test_decreasing_in_time(self, alpha, t, dt):
        assert gamma_of_t(alpha, t + dt, FREE) < gamma_of_t(alpha, t, FREE) <= (1.0 + 1e-15) / alpha

    def test_free_packet_density_at_unit_time(self):
        grid = Grid1D.symmetric(20.0, 0.025)
        psi = propagate_cn(packet_field(GaussianPacket(1.0), grid), FREE, 1.0)
        exact = free_density(grid, 1.0, 1.0, FREE)
        assert np.max(np.abs(born_probability(psi).values - exact)) < 1e-4


class TestPropagation:
    def test_zero_time(self):
        grid = Grid1D.symmetric(8.0, 0.05)
        psi0 = packet_field(GaussianPacket(1.0), grid)
        assert propagate_cn(psi0, FREE, 0.0) is psi0

    def test_requires_normalized_input(self):
        grid = Grid1D.symmetric(8.0, 0.05)
        with pytest.raises(ValueError):
            propagate_cn(AmplitudeField(grid, 2 * packet_field(GaussianPacket(1.0), grid).values), FREE, 1.0)

    def test_dt_bound(self):
        grid = Grid1D.symmetric(8.0, 0.05)
        cn = CrankNicolson(grid, FREE)
        assert cn.dt_max == pytest.approx(0.1 * FREE.hbar / cn.e_max)
        assert cn.e_max >= cn.energies.max()
        with pytest.raises(ValueError, match="fastest phase"):
            CrankNicolson(grid, FREE, dt=2 * cn.dt_max)

    def test_small_domain_is_reported(self):
        grid = Grid1D.symmetric(4.0, 0.05)
        psi0 = packet_field(GaussianPacket(0.5, momentum=3.0), grid)
        with pytest.raises(NormDriftError, match="domain too small or dt too large"):
            propagate_cn(psi0, FREE, 3.0)

    def test_literal_steps_match_eigen_evolution(self):
        grid = Grid1D.symmetric(10.0, 0.05)
        psi0 = packet_field(GaussianPacket(0.7, center=1.0, momentum=-2.0), grid)
        cn = CrankNicolson(grid, FREE)
        v = np.array(psi0.values)
        for _ in range(200):
            v = cn.step(v)
        assert np.max(np.abs(v - cn.evolve(psi0.values, 200))) < 1e-11

    def test_unitarity_over_1000_steps(self):
        grid = Grid1D.symmetric(15.0, 0.05)
        psi0 = packet_field(GaussianPacket(1.0, momentum=1.0), grid)
        cn = CrankNicolson(grid, FREE)
        v = np.array(psi0.values)
        for _ in range(1000):
            v = cn.step(v)
        assert abs(AmplitudeField(grid, v).norm2() - 1.0) < 1e-9

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.3, 2.0), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.floats(0.1, 2.0))
    def test_time_reversal(self, alpha, center, momentum, t):
        grid = Grid1D.symmetric(20.0, 0.05)
        psi0 = packet_field(GaussianPacket(alpha, center, momentum), grid)
        fwd = propagate_cn(psi0, FREE, t)
        back = propagate_cn(AmplitudeField(grid, np.conj(fwd.values)), FREE, t)
        assert np.max(np.abs(np.conj(back.values) - psi0.values)) < 1e-6
        assert abs(fwd.norm2() - 1.0) < 1e-9

    @pytest.mark.slow
    def test_harmonic_ground_state_is_stationary(self):
        grid = Grid1D.symmetric(6.0, 0.003)
        psi0, gs = harmonic_ground_state(HO, grid)
        psi = propagate_cn(psi0, HO, 1.0)
        drift = distance(born_probability(psi), born_probability(psi0), "Linf")
        assert drift < 1e-6
        # global phase exp(-i E t / hbar) with E the per-axis share of E0
        mid = grid.n // 2
        phase = psi.values[mid] / psi0.values[mid]
        assert abs(phase - np.exp(-1j * gs.energy_per_axis)) < 1e-4


class TestBorn:
    def test_two_level(self):
        p = born_probability([0.5, math.sqrt(3) / 2])
        assert isinstance(p, DiscreteDistribution)
        np.testing.assert_allclose(p.probs, [0.25, 0.75], rtol=1e-15)

    def test_phase_invariance(self):
        grid = Grid1D.symmetric(8.0, 0.05)
        psi = packet_field(GaussianPacket(1.3, momentum=0.4), grid)
        rotated = AmplitudeField(grid, np.exp(0.77j) * psi.values)
        np.testing.assert_allclose(born_probability(rotated).values, born_probability(psi).values, rtol=1e-14)

    def test_packet_variance(self):
        grid = Grid1D.symmetric(12.0, 0.01)
        rho = born_probability(packet_field(GaussianPacket(1.0), grid))
        assert rho.total() == pytest.approx(1.0, abs=1e-10)
        assert variance(rho) == pytest.approx(0.5, rel=1e-8)


class TestCollapse:
    def test_uniform_becomes_packet(self):
        grid = Grid1D.symmetric(10.0, 0.01)
        flat = AmplitudeField(grid, np.ones(grid.n))
        out = collapse(flat, 0.0, 0.8)
        np.testing.assert_allclose(out.values, packet_field(GaussianPacket(0.8), grid).values, atol=1e-12)

    def test_gaussian_product_halves_alpha(self):
        grid = Grid1D.symmetric(10.0, 0.01)
        out = collapse(packet_field(GaussianPacket(0.6), grid), 0.0, 0.6)
        np.testing.assert_allclose(out.values, packet_field(GaussianPacket(0.3), grid).values, atol=1e-12)

    def test_incompatible_outcome(self):
        grid = Grid1D.symmetric(10.0, 0.01)
        with pytest.raises(IncompatibleOutcomeError, match="incompatible outcome"):
            collapse(packet_field(GaussianPacket(0.1), grid), 8.0, 0.1)

    def test_rejects_bad_width(self):
        grid = Grid1D.symmetric(5.0, 0.1)
        with pytest.raises(ValueError):
            collapse(packet_field(GaussianPacket(1.0), grid), 0.0, 0.0)


class TestHarmonic:
    def test_unit_parameters(self):
        grid = Grid1D.symmetric(10.0, 0.01)
        psi, gs = harmonic_ground_state(HO, grid)
        assert gs.lambda_ == 2.0 and gs.E0 == 1.5
        assert variance(born_probability(psi)) == pytest.approx(1 / gs.lambda_, rel=1e-8)

    @given(st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.floats(0.01, 10.0))
    def test_energy_forms_agree(self, hbar, m, b):
        q = QuantumParams(hbar=hbar, m=m, b=b)
        _, gs = harmonic_ground_state(q, Grid1D(-1.0, 1.0, 5))
        assert gs.E0 == pytest.approx(1.5 * hbar * math.sqrt(b / m), rel=1e-12)
        assert hbar**2 * gs.lambda_**2 / (4 * m) == pytest.approx(b, rel=1e-12)

    def test_free_particle_has_no_ground_state(self):
        with pytest.raises(ValueError, match="no bound ground state"):
            harmonic_ground_state(FREE, Grid1D.symmetric(5.0, 0.1))

    def test_eigen_consistency(self):
        grid = Grid1D.symmetric(8.0, 0.01)
        psi, gs = harmonic_ground_state(HO, grid)
        hpsi = apply_hamiltonian(psi, HO)
        core = np.abs(grid.points) < 2.0
        local = (hpsi[core] / psi.values[core]).real
        np.testing.assert_allclose(local, gs.energy_per_axis, rtol=1e-3)
        assert energy_expectation(psi, HO) == pytest.approx(gs.energy_per_axis, rel=1e-3)


class TestTrajectory:
    def test_reproducible(self):
        grid = Grid1D.symmetric(6.0, 0.05)
        psi0, _ = harmonic_ground_state(HO, grid)
        a = measurement_trajectory(psi0, HO, 1.0, 1e4, 20.0, seed=3)
        b = measurement_trajectory(psi0, HO, 1.0, 1e4, 20.0, seed=3)
        assert a == b and len(a.events) == 21
        assert a != measurement_trajectory(psi0, HO, 1.0, 1e4, 20.0, seed=4)

    def test_free_increments_have_zero_mean(self):
        grid = Grid1D.symmetric(25.0, 0.05)
        psi0 = packet_field(GaussianPacket(1.0), grid)
        rec = measurement_trajectory(psi0, FREE, period=0.01, alpha_meas=0.5, t_end=1.0, seed=8)
        inc = np.diff(rec.values)
        assert abs(inc.mean()) < 3 * inc.std(ddof=1) / math.sqrt(len(inc))

    def test_ground_state_positions_follow_born_density(self):
        grid = Grid1D.symmetric(6.0, 0.025)
        psi0, _ = harmonic_ground_state(HO, grid)
        rec = measurement_trajectory(psi0, HO, 1.0, 1e6, 1999.0, seed=5)
        assert chi_square_against(rec.values, born_probability(psi0)).passes(0.999)
        assert np.all(np.diff(rec.values) != 0)

    def test_sharp_measurements_heat_the_oscillator(self):
        # each narrow collapse injects momentum spread; the packet eventually reaches the walls
        grid = Grid1D.symmetric(6.0, 0.025)
        psi0, _ = harmonic_ground_state(HO, grid)
        with pytest.raises(NormDriftError):
            measurement_trajectory(psi0, HO, 1.0, 1e-2, 200.0, seed=5)

    def test_csv(self, tmp_path):
        grid = Grid1D.symmetric(6.0, 0.05)
        psi0, _ = harmonic_ground_state(HO, grid)
        rec = measurement_trajectory(psi0, HO, 0.5, 1e4, 1.0, seed=1)
        rec.write_csv(tmp_path / "traj.csv", value_name="x")
        lines = (tmp_path / "traj.csv").read_text().splitlines()
        assert lines[0] == "t,x" and len(lines) == 4
        write_field_csv(psi0, tmp_path / "psi.csv")
        assert (tmp_path / "psi.csv").read_text().startswith("x,re,im\n")
