"""Small-step limit of the master equation.

Jump moments of a transition kernel, a conservative finite-volume
Fokker-Planck solver for dP/dt = a1 d(xP)/dx + D d2P/dx2, the free
diffusion kernel, the Ornstein-Uhlenbeck stationary state and an
Euler-Maruyama sampler of the same process. All numerics are 1-D; the
isotropic 3-D equations factor per Cartesian axis.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy import sparse
from scipy.integrate import IntegrationWarning, quad
from scipy.sparse.linalg import splu
from scipy.special import exprel

from .fields import Grid1D, ProbabilityField, normalize, trapezoid
from .rng import root_stream, substream

__all__ = [
    "FPParams",
    "TransitionKernel",
    "BrownianPath",
    "QuadratureError",
    "DomainTooSmallError",
    "gaussian_kernel",
    "jump_moments",
    "fp_operator",
    "propagate_fp",
    "max_stable_dt",
    "diffusion_kernel",
    "ou_stationary",
    "ou_mean_variance",
    "euler_maruyama",
    "euler_maruyama_ensemble",
]

MASS_TOL = 1e-8
LEAK_TOL = 1e-6
NEG_TOL = 1e-10
NEG_CLIP_LIMIT = 1e-8
EDGE_FRACTION = 0.02


class QuadratureError(ArithmeticError):
    pass


class DomainTooSmallError(ArithmeticError):
    pass


@dataclass(frozen=True)
class FPParams:
    a1: float
    D: float

    def __post_init__(self):
        if not self.D > 0:
            raise ValueError(f"diffusion coefficient must be positive, got {self.D}")
        if self.a1 < 0:
            raise ValueError(f"drift strength must be nonnegative, got {self.a1}")

    @property
    def kappa(self) -> float:
        return self.a1 / self.D


@dataclass(frozen=True)
class TransitionKernel:
    """Rate density W(r; s) for a step s taken from base point r.

    ``peak`` optionally locates the bulk of the kernel in s, which helps
    the adaptive quadrature find narrow kernels.
    """

    rate: Callable[[float, float], float]
    s_max: float
    peak: Optional[Callable[[float], float]] = None


def gaussian_kernel(params: FPParams, tau: float = 1.0, r_window: float = 3.0) -> TransitionKernel:
    """Kernel with linear restoring drift: steps ~ N(-a1 r tau, 2 D tau), total rate 1/tau.

    Its jump moments are a_1(r) = -a1 r and a_2(r) = 2D + a1^2 r^2 tau.
    The cutoff is ten standard deviations beyond the largest mean step
    reached for |r| <= r_window.
    """
    sd = math.sqrt(2.0 * params.D * tau)
    norm = 1.0 / (tau * sd * math.sqrt(2.0 * math.pi))

    def rate(r, s):
        z = (s + params.a1 * r * tau) / sd
        return norm * math.exp(-0.5 * z * z)

    return TransitionKernel(
        rate=rate,
        s_max=10.0 * sd + params.a1 * r_window * tau,
        peak=lambda r: -params.a1 * r * tau,
    )


def jump_moments(k: TransitionKernel, r: float, i: int) -> float:
    """i-th jump moment: integral of s**i W(r; s) over [-s_max, s_max]."""
    if i not in (1, 2):
        raise ValueError("only the first two jump moments enter the Fokker-Planck equation")
    points = None
    if k.peak is not None:
        p = k.peak(r)
        if -k.s_max < p < k.s_max:
            points = [p]
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(lambda s: s**i * k.rate(r, s), -k.s_max, k.s_max,
                            points=points, epsabs=1e-12, epsrel=1e-10, limit=200)
        except IntegrationWarning as exc:
            raise QuadratureError(f"jump moment quadrature did not converge: {exc}") from exc
    if err > max(1e-8 * abs(val), 1e-10):
        raise QuadratureError(f"jump moment quadrature error estimate {err:.3e} for value {val:.6e}")
    return float(val)


def fp_operator(grid: Grid1D, params: FPParams) -> sparse.csc_matrix:
    """Finite-volume operator L with dP/dt = L P and zero-flux walls.

    Node i owns a control volume equal to its trapezoid weight. Interface
    fluxes use exponential fitting (Scharfetter-Gummel / Chang-Cooper):
    J = (D/dx) [B(-z) P_i - B(z) P_{i+1}], z = v dx / D with the drift
    velocity v = -a1 x evaluated mid-cell and B(z) = z / (exp(z) - 1).
    The discrete stationary state is then exactly proportional to
    exp(-a1 x^2 / 2D) at the nodes, and the trapezoid mass is conserved.
    """
    x = grid.points
    dx = grid.dx
    xm = 0.5 * (x[:-1] + x[1:])
    z = -params.a1 * xm * dx / params.D
    bp = 1.0 / exprel(z)       # B(z)
    bm = 1.0 / exprel(-z)      # B(-z)
    c = params.D / dx
    # flux J_k = c*bm_k*P_k - c*bp_k*P_{k+1}; dP_i/dt = (J_{i-1} - J_i) / w_i
    w = grid.weights
    n = grid.n
    main = np.zeros(n)
    upper = np.zeros(n - 1)
    lower = np.zeros(n - 1)
    main[:-1] -= c * bm
    upper += c * bp
    main[1:] -= c * bp
    lower += c * bm
    L = sparse.diags([lower / w[1:], main / w, upper / w[:-1]], [-1, 0, 1], format="csc")
    return L


def max_stable_dt(grid: Grid1D, params: FPParams) -> float:
    """Drift step bound dt <= dx / (a1 max|x|); unbounded for pure diffusion."""
    reach = params.a1 * max(abs(grid.x_min), abs(grid.x_max))
    return math.inf if reach == 0 else grid.dx / reach


def _edge_mass(values: np.ndarray, grid: Grid1D) -> float:
    k = max(2, int(EDGE_FRACTION * grid.n))
    w = grid.weights
    return float(np.dot(w[:k], values[:k]) + np.dot(w[-k:], values[-k:]))


def propagate_fp(p0: ProbabilityField, params: FPParams, t: float, dt: float) -> ProbabilityField:
    """Crank-Nicolson integration of the Fokker-Planck equation up to time t.

    The step actually used is t / ceil(t / dt) <= dt.
    """
    if t < 0:
        raise ValueError("propagation time must be nonnegative")
    if dt <= 0:
        raise ValueError("time step must be positive")
    grid = p0.grid
    mass0 = p0.total()
    if abs(mass0 - 1.0) > 1e-8:
        raise ValueError(f"initial density is not normalized (mass {mass0!r})")
    if t == 0:
        return p0
    limit = max_stable_dt(grid, params)
    if dt > limit:
        raise ValueError(f"time step {dt} exceeds the drift bound {limit:.6g}")
    nsteps = math.ceil(t / dt - 1e-12)
    h = t / nsteps
    L = fp_operator(grid, params)
    eye = sparse.identity(grid.n, format="csc")
    lhs = splu((eye - 0.5 * h * L).tocsc())
    rhs = (eye + 0.5 * h * L).tocsr()
    p = np.array(p0.values)
    for _ in range(nsteps):
        p = lhs.solve(rhs @ p)

    mass = trapezoid(p, grid)
    if abs(mass - mass0) > MASS_TOL:
        raise DomainTooSmallError(f"mass drifted by {mass - mass0:.3e}")
    low = p.min()
    if low < -NEG_CLIP_LIMIT:
        raise ArithmeticError(f"density went negative ({low:.3e}); reduce dt")
    if low < 0:
        p = np.clip(p, 0.0, None)
    if _edge_mass(p, grid) > LEAK_TOL:
        raise DomainTooSmallError("domain too small: probability has reached the walls")
    return normalize(ProbabilityField(grid, p))


def diffusion_kernel(r, t: float, D: float):
    """Free-diffusion density in 3-D at distance r from a point source."""
    if t <= 0:
        raise ValueError("the kernel is defined only for t > 0")
    if D <= 0:
        raise ValueError("diffusion coefficient must be positive")
    r = np.asarray(r, dtype=float)
    out = (4.0 * np.pi * D * t) ** -1.5 * np.exp(-(r**2) / (4.0 * D * t))
    return float(out) if out.ndim == 0 else out


def ou_stationary(params: FPParams, grid: Grid1D) -> ProbabilityField:
    """1-D marginal of the stationary state, proportional to exp(-kappa x^2 / 2)."""
    if params.a1 <= 0:
        raise ValueError("no normalizable stationary state for a1 = 0")
    x = grid.points
    return normalize(ProbabilityField(grid, np.exp(-0.5 * params.kappa * x**2)))


def ou_mean_variance(params: FPParams, x0: float, t: float) -> tuple[float, float]:
    """Exact mean and variance at time t of the process started at x0."""
    if params.a1 == 0:
        return x0, 2.0 * params.D * t
    decay = math.exp(-params.a1 * t)
    return x0 * decay, params.D / params.a1 * (1.0 - decay**2)


@dataclass(frozen=True)
class BrownianPath:
    """positions[k] is the position at time k * dt (positions[0] = x0)."""

    seed: int
    dt: float
    positions: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.positions)):
            raise ValueError("path contains non-finite positions")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.positions))

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x"])
            for t, x in zip(self.times, self.positions):
                w.writerow([format(float(t), ".17g"), format(float(x), ".17g")])


def _steps(t_end: float, dt: float) -> tuple[int, float]:
    if dt <= 0:
        raise ValueError("time step must be positive")
    if t_end < 0:
        raise ValueError("end time must be nonnegative")
    n = math.ceil(t_end / dt - 1e-9)
    return n, (t_end / n if n else dt)


def euler_maruyama(params: FPParams, x0: float, t_end: float, dt: float, seed: int) -> BrownianPath:
    """x_{k+1} = x_k - a1 x_k h + sqrt(2 D h) xi_k with h = t_end / ceil(t_end / dt)."""
    n, h = _steps(t_end, dt)
    xi = root_stream(seed).standard_normal(n)
    x = np.empty(n + 1)
    x[0] = x0
    decay = 1.0 - params.a1 * h
    kick = math.sqrt(2.0 * params.D * h)
    for k in range(n):
        x[k + 1] = decay * x[k] + kick * xi[k]
    return BrownianPath(seed=int(seed), dt=h, positions=x)


ENSEMBLE_BLOCK = 8192


def euler_maruyama_ensemble(params: FPParams, x0: float, t_end: float, dt: float,
                            n_paths: int, seed: int) -> np.ndarray:
    """Final positions of ``n_paths`` independent paths.

    Paths are processed in blocks of ``ENSEMBLE_BLOCK``; block j draws its
    noise from sub-stream j, so blocks may run in any order or in parallel.
    """
    n, h = _steps(t_end, dt)
    decay = 1.0 - params.a1 * h
    kick = math.sqrt(2.0 * params.D * h)
    out = np.empty(n_paths)
    for j, start in enumerate(range(0, n_paths, ENSEMBLE_BLOCK)):
        stop = min(start + ENSEMBLE_BLOCK, n_paths)
        rng = substream(seed, j)
        x = np.full(stop - start, float(x0))
        for _ in range(n):
            x = decay * x + kick * rng.standard_normal(stop - start)
        out[start:stop] = x
    return out
