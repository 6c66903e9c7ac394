"""Quantum evolution of the probability amplitude on a 1-D grid.

The Hamiltonian -hbar^2/(2m) d2/dx2 + b x^2 / 2 is discretized with the
three-point Laplacian on the interior nodes; the two end nodes are held
at zero (Dirichlet walls). Crank-Nicolson time stepping maps one step to
the Cayley transform (1 - i h H / 2 hbar)^-1 (1 + ... ) of that symmetric
tridiagonal matrix, which is exactly unitary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded

from .fields import (
    AmplitudeField,
    DiscreteDistribution,
    Grid1D,
    ProbabilityField,
    inverse_cdf,
    normalize,
    trapezoid,
)
from .master_eq import TrajectoryRecord
from .rng import root_stream

__all__ = [
    "QuantumParams",
    "GaussianPacket",
    "HarmonicGroundState",
    "CrankNicolson",
    "NormDriftError",
    "IncompatibleOutcomeError",
    "gamma_of_t",
    "packet_field",
    "free_density",
    "propagate_cn",
    "apply_hamiltonian",
    "energy_expectation",
    "born_probability",
    "collapse",
    "measurement_trajectory",
    "harmonic_ground_state",
]

NORM_DRIFT_TOL = 1e-7
EDGE_TOL = 1e-7
EDGE_FRACTION = 0.02


class NormDriftError(ArithmeticError):
    pass


class IncompatibleOutcomeError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumParams:
    hbar: float = 1.0
    m: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.m > 0):
            raise ValueError("hbar and m must be positive")
        if self.b < 0:
            raise ValueError("harmonic constant must be nonnegative")


@dataclass(frozen=True)
class GaussianPacket:
    alpha: float
    center: float = 0.0
    momentum: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("width parameter alpha must be positive")


@dataclass(frozen=True)
class HarmonicGroundState:
    """lambda_ sets the Gaussian exp(-lambda r^2 / 4); E0 is the full 3-D energy."""

    lambda_: float
    E0: float
    params: QuantumParams

    def __post_init__(self):
        q = self.params
        b = q.hbar**2 * self.lambda_**2 / (4.0 * q.m)
        e = 3.0 * q.hbar**2 * self.lambda_ / (4.0 * q.m)
        if not (math.isclose(b, q.b, rel_tol=1e-12) and math.isclose(e, self.E0, rel_tol=1e-12)):
            raise ValueError("lambda, E0 and b are inconsistent")

    @property
    def energy_per_axis(self) -> float:
        return self.E0 / 3.0


def gamma_of_t(alpha: float, t: float, q: QuantumParams) -> float:
    """Inverse-width parameter of a free Gaussian packet: alpha / (alpha^2 + hbar^2 t^2 / m^2)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return alpha / (alpha**2 + (q.hbar * t / q.m) ** 2)


def packet_field(packet: GaussianPacket, grid: Grid1D, q: QuantumParams = QuantumParams()) -> AmplitudeField:
    """1-D factor (pi alpha)^(-1/4) exp(-(x-c)^2 / 2 alpha) exp(i p x / hbar), renormalized on the grid."""
    x = grid.points
    a = packet.alpha
    v = (np.pi * a) ** -0.25 * np.exp(-((x - packet.center) ** 2) / (2 * a) + 1j * packet.momentum * x / q.hbar)
    return normalize(AmplitudeField(grid, v))


def free_density(grid: Grid1D, alpha: float, t: float, q: QuantumParams) -> np.ndarray:
    """Closed-form |psi(x, t)|^2 of a free packet centred at the origin, per axis."""
    g = gamma_of_t(alpha, t, q)
    x = grid.points
    return np.sqrt(g / np.pi) * np.exp(-g * x**2)


class CrankNicolson:
    """Crank-Nicolson propagator for a fixed grid, parameters and step.

    ``step`` performs one literal tridiagonal solve. ``evolve`` applies N
    steps at once through the eigenbasis of the discrete Hamiltonian,
    where each step multiplies mode E by exp(-2i arctan(E h / 2 hbar)).
    Both give the same map up to round-off; ``evolve`` costs the same for
    any N.
    """

    def __init__(self, grid: Grid1D, q: QuantumParams, dt: Optional[float] = None):
        self.grid = grid
        self.q = q
        x = grid.points[1:-1]
        kin = q.hbar**2 / (2.0 * q.m * grid.dx**2)
        self._diag = 2.0 * kin + 0.5 * q.b * x**2
        self._off = np.full(len(x) - 1, -kin)
        # Gershgorin bound on the largest eigenvalue
        self.e_max = float(self._diag.max() + 2.0 * kin)
        self.dt_max = 0.1 * q.hbar / self.e_max
        if dt is None:
            dt = self.dt_max
        if dt <= 0:
            raise ValueError("time step must be positive")
        if dt > self.dt_max * (1 + 1e-12):
            raise ValueError(f"dt = {dt} does not resolve the fastest phase (need dt <= {self.dt_max:.4g})")
        self.dt = float(dt)

    def _banded(self, sign: float) -> np.ndarray:
        c = sign * 0.5j * self.dt / self.q.hbar
        n = len(self._diag)
        ab = np.zeros((3, n), dtype=complex)
        ab[0, 1:] = c * self._off
        ab[1] = 1.0 + c * self._diag
        ab[2, :-1] = c * self._off
        return ab

    @cached_property
    def _lhs(self) -> np.ndarray:
        return self._banded(+1.0)

    @cached_property
    def _eig(self):
        return eigh_tridiagonal(self._diag, self._off)

    @property
    def energies(self) -> np.ndarray:
        return self._eig[0]

    def apply_h(self, interior: np.ndarray) -> np.ndarray:
        out = self._diag * interior
        out[:-1] += self._off * interior[1:]
        out[1:] += self._off * interior[:-1]
        return out

    def step(self, values: np.ndarray) -> np.ndarray:
        psi = np.zeros(self.grid.n, dtype=complex)
        inner = np.asarray(values, dtype=complex)[1:-1]
        rhs = inner - 0.5j * self.dt / self.q.hbar * self.apply_h(inner)
        psi[1:-1] = solve_banded((1, 1), self._lhs, rhs)
        return psi

    def evolve(self, values: np.ndarray, nsteps: int) -> np.ndarray:
        E, V = self._eig
        phase = np.exp(-2j * nsteps * np.arctan(0.5 * E * self.dt / self.q.hbar))
        psi = np.zeros(self.grid.n, dtype=complex)
        inner = np.ascontiguousarray(values[1:-1], dtype=complex)
        # real eigenvectors act on (re, im) column pairs, avoiding a complex copy of V
        coef = (V.T @ inner.view(float).reshape(-1, 2)).view(complex).ravel() * phase
        psi[1:-1] = (V @ coef.view(float).reshape(-1, 2)).view(complex).ravel()
        return psi

    def nsteps_for(self, t: float) -> int:
        return math.ceil(t / self.dt - 1e-9)


def _edge_mass(values: np.ndarray, grid: Grid1D) -> float:
    k = max(2, int(EDGE_FRACTION * grid.n))
    rho = np.abs(values) ** 2
    w = grid.weights
    return float(np.dot(w[:k], rho[:k]) + np.dot(w[-k:], rho[-k:]))


def _checked(psi: np.ndarray, norm0: float, grid: Grid1D) -> AmplitudeField:
    norm = trapezoid(np.abs(psi) ** 2, grid)
    if abs(norm - norm0) > NORM_DRIFT_TOL or _edge_mass(psi, grid) > EDGE_TOL:
        raise NormDriftError("domain too small or dt too large")
    return AmplitudeField(grid, psi)


def propagate_cn(psi0: AmplitudeField, q: QuantumParams, t: float, dt: Optional[float] = None,
                 propagator: Optional[CrankNicolson] = None) -> AmplitudeField:
    """Evolve psi0 for time t >= 0 with Crank-Nicolson steps of size t / ceil(t / dt).

    ``dt`` defaults to the largest admissible step 0.1 hbar / E_max.
    """
    if t < 0:
        raise ValueError("use a conjugated field to run backward in time")
    norm0 = psi0.norm2()
    if abs(norm0 - 1.0) > 1e-9:
        raise ValueError(f"initial amplitude is not normalized (norm {norm0!r})")
    if t == 0:
        return psi0
    if propagator is None:
        cn = CrankNicolson(psi0.grid, q, dt)
        nsteps = cn.nsteps_for(t)
        cn = CrankNicolson(psi0.grid, q, t / nsteps)
    else:
        cn = propagator
        nsteps = round(t / cn.dt)
        if abs(nsteps * cn.dt - t) > 1e-9 * max(t, 1.0):
            raise ValueError("t is not a whole number of propagator steps")
    return _checked(cn.evolve(psi0.values, nsteps), norm0, psi0.grid)


def apply_hamiltonian(psi: AmplitudeField, q: QuantumParams) -> np.ndarray:
    """Discrete H applied to psi (interior stencil, zero at the walls)."""
    cn = CrankNicolson(psi.grid, q)
    out = np.zeros(psi.grid.n, dtype=complex)
    out[1:-1] = cn.apply_h(np.asarray(psi.values[1:-1], dtype=complex))
    return out


def energy_expectation(psi: AmplitudeField, q: QuantumParams) -> float:
    hpsi = apply_hamiltonian(psi, q)
    num = trapezoid(np.conj(psi.values) * hpsi, psi.grid)
    return float(num.real / psi.norm2())


def born_probability(psi):
    """|psi|^2. A grid amplitude gives a normalized density; a plain vector a distribution."""
    if isinstance(psi, AmplitudeField):
        return normalize(ProbabilityField(psi.grid, np.abs(psi.values) ** 2))
    amp = np.asarray(psi, dtype=complex)
    p = np.abs(amp) ** 2
    return DiscreteDistribution(p / p.sum())


def collapse(psi: AmplitudeField, x_meas: float, alpha_meas: float) -> AmplitudeField:
    """Finite-resolution position measurement with outcome x_meas.

    The amplitude is multiplied by exp(-(x - x_meas)^2 / 2 alpha_meas) and
    renormalized. A point projection is not offered: it is not normalizable.
    """
    if not alpha_meas > 0:
        raise ValueError("measurement width must be positive")
    g = np.exp(-((psi.x - x_meas) ** 2) / (2.0 * alpha_meas))
    new = AmplitudeField(psi.grid, g * psi.values)
    if new.norm2() < 1e-12:
        raise IncompatibleOutcomeError("incompatible outcome")
    return normalize(new)


def measurement_trajectory(psi0: AmplitudeField, q: QuantumParams, period: float, alpha_meas: float,
                           t_end: float, seed: int, dt: Optional[float] = None) -> TrajectoryRecord:
    """Repeated position measurements at t = 0, period, 2 period, ... <= t_end.

    Each measurement draws a position from the Born density by inverse-CDF
    sampling, collapses onto it, and the collapsed amplitude is propagated
    for one period. Events hold (time, measured position).
    """
    if not period > 0:
        raise ValueError("measurement period must be positive")
    if not alpha_meas > 0:
        raise ValueError("measurement width must be positive")
    rng = root_stream(seed)
    n_meas = int(math.floor(t_end / period + 1e-9)) + 1
    cn = CrankNicolson(psi0.grid, q, dt)
    nsteps = cn.nsteps_for(period)
    cn = CrankNicolson(psi0.grid, q, period / nsteps)
    grid = psi0.grid
    x_nodes = grid.points
    w = grid.weights
    psi = np.array(psi0.values)
    events = []
    for k in range(n_meas):
        x = float(inverse_cdf(np.abs(psi) ** 2, grid, rng.random()))
        events.append((k * period, x))
        psi = psi * np.exp(-((x_nodes - x) ** 2) / (2.0 * alpha_meas))
        norm = np.dot(w, np.abs(psi) ** 2)
        if norm < 1e-12:
            raise IncompatibleOutcomeError("incompatible outcome")
        psi /= np.sqrt(norm)
        if k + 1 < n_meas:
            psi = cn.evolve(psi, nsteps)
            if abs(np.dot(w, np.abs(psi) ** 2) - 1.0) > NORM_DRIFT_TOL or _edge_mass(psi, grid) > EDGE_TOL:
                raise NormDriftError("domain too small or dt too large")
    return TrajectoryRecord(seed=int(seed), events=tuple(events), t_end=float(t_end))


def harmonic_ground_state(q: QuantumParams, grid: Grid1D):
    """Ground state of b x^2 / 2: per-axis factor of exp(-lambda r^2 / 4), lambda = sqrt(4 m b) / hbar."""
    if q.b <= 0:
        raise ValueError("no bound ground state for b = 0")
    lam = math.sqrt(4.0 * q.m * q.b) / q.hbar
    e0 = 3.0 * q.hbar**2 * lam / (4.0 * q.m)
    x = grid.points
    psi = normalize(AmplitudeField(grid, (lam / (2 * np.pi)) ** 0.25 * np.exp(-lam * x**2 / 4)))
    return psi, HarmonicGroundState(lambda_=lam, E0=e0, params=q)
