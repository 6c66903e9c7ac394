"""Two-slit screen patterns and spin-pair correlations.

Two-slit model: two point sources at transverse positions +d/2 and -d/2,
a screen at distance L, and exact path lengths r_s(x). Each slit
contributes the amplitude exp(i k r_s) / sqrt(r_s). Far-field formulas
are never used here; they serve as test oracles only.

Spin pairs live in the basis (uu, ud, du, dd) with u the +1 eigenvector
of sigma_z.
"""
from __future__ import annotations

import csv
import itertools
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .fields import Grid1D, ProbabilityField, cell_masses, inverse_cdf, normalize
from .rng import root_stream, substream

__all__ = [
    "SlitGeometry",
    "FarFieldWarning",
    "EmpiricalPattern",
    "TwoQubitState",
    "MeasurementSetting",
    "EPRRun",
    "X",
    "Z",
    "joint_probabilities",
    "default_geometry",
    "slit_amplitudes",
    "single_slit_density",
    "two_slit_quantum",
    "two_slit_classical",
    "two_slit_measured",
    "visibility",
    "correlation_E",
    "chsh",
    "chsh_settings",
    "lhv_assignment_values",
    "lhv_bound",
    "sample_epr",
    "sample_chsh",
    "sample_lhv_chsh",
]

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class FarFieldWarning(UserWarning):
    pass


# --------------------------------------------------------------------------
# two slits


@dataclass(frozen=True)
class SlitGeometry:
    d: float
    L: float
    k: float
    screen: Grid1D

    def __post_init__(self):
        if min(self.d, self.L, self.k) <= 0:
            raise ValueError("slit separation, distance and wavenumber must be positive")

    @property
    def screen_extent(self) -> float:
        return self.screen.x_max - self.screen.x_min

    @property
    def far_field(self) -> bool:
        """L is at least ten times both the slit separation and the screen extent."""
        return self.L >= 10 * self.d and self.L >= 10 * self.screen_extent

    @property
    def fringe_spacing(self) -> float:
        return 2 * math.pi * self.L / (self.k * self.d)


def default_geometry(n: int = 2001) -> SlitGeometry:
    """d = 1, L = 100, wavelength 0.01 (ten fringes on a screen of width 10)."""
    return SlitGeometry(d=1.0, L=100.0, k=2 * math.pi / 0.01, screen=Grid1D(-5.0, 5.0, n))


def _check_far_field(geom: SlitGeometry) -> None:
    if not geom.far_field:
        warnings.warn("geometry is outside the far-field regime", FarFieldWarning, stacklevel=3)


def slit_amplitudes(geom: SlitGeometry) -> tuple[np.ndarray, np.ndarray]:
    x = geom.screen.points
    out = []
    for y in (0.5 * geom.d, -0.5 * geom.d):
        r = np.hypot(geom.L, x - y)
        out.append(np.exp(1j * geom.k * r) / np.sqrt(r))
    return out[0], out[1]


def single_slit_density(geom: SlitGeometry, slit: int) -> ProbabilityField:
    """Normalized screen density with only slit 0 (+d/2) or 1 (-d/2) open."""
    amp = slit_amplitudes(geom)[slit]
    return normalize(ProbabilityField(geom.screen, np.abs(amp) ** 2))


def two_slit_quantum(geom: SlitGeometry) -> ProbabilityField:
    """Amplitudes add: density proportional to |psi_A + psi_B|^2."""
    _check_far_field(geom)
    a, b = slit_amplitudes(geom)
    return normalize(ProbabilityField(geom.screen, np.abs(a + b) ** 2))


def two_slit_classical(geom: SlitGeometry) -> ProbabilityField:
    """Probabilities add: density proportional to |psi_A|^2 + |psi_B|^2."""
    _check_far_field(geom)
    a, b = slit_amplitudes(geom)
    return normalize(ProbabilityField(geom.screen, np.abs(a) ** 2 + np.abs(b) ** 2))


def visibility(f: ProbabilityField, window: Optional[tuple[float, float]] = None) -> float:
    """(I_max - I_min) / (I_max + I_min) over the nodes inside ``window``."""
    v = f.values
    if window is not None:
        x = f.x
        v = v[(x >= window[0]) & (x <= window[1])]
    hi, lo = v.max(), v.min()
    return float((hi - lo) / (hi + lo))


@dataclass(frozen=True)
class EmpiricalPattern:
    """Histogram of screen hits; bin edges sit on screen grid nodes."""

    edges: np.ndarray
    counts: np.ndarray
    node_index: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def masses(self) -> np.ndarray:
        return self.counts / self.counts.sum()

    @property
    def density(self) -> np.ndarray:
        return self.masses / np.diff(self.edges)

    def reference_masses(self, f: ProbabilityField) -> np.ndarray:
        """Bin probabilities of a density on the screen grid (sums of trapezoid cell masses)."""
        cum = np.concatenate(([0.0], np.cumsum(cell_masses(f))))
        cum /= cum[-1]
        return np.diff(cum[self.node_index])

    def tv_to(self, f: ProbabilityField) -> float:
        return float(0.5 * np.abs(self.masses - self.reference_masses(f)).sum())

    def write_csv(self, path) -> None:
        centers = 0.5 * (self.edges[:-1] + self.edges[1:])
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "intensity"])
            for x, v in zip(centers, self.density):
                w.writerow([format(float(x), ".17g"), format(float(v), ".17g")])


def two_slit_measured(geom: SlitGeometry, n: int, seed: int, n_bins: int = 200) -> EmpiricalPattern:
    """Which-slit detection: each particle is found at slit A or B with probability 1/2
    and then lands according to that slit's single-slit density."""
    if n < 1:
        raise ValueError("need at least one particle")
    cells = geom.screen.n - 1
    if cells % n_bins:
        raise ValueError(f"n_bins must divide the {cells} screen cells")
    rng = root_stream(seed)
    at_a = rng.random(n) < 0.5
    u = rng.random(n)
    hits = np.empty(n)
    for slit, mask in ((0, at_a), (1, ~at_a)):
        dens = single_slit_density(geom, slit)
        hits[mask] = inverse_cdf(dens.values, geom.screen, u[mask])
    node_index = np.arange(0, cells + 1, cells // n_bins)
    edges = geom.screen.points[node_index]
    counts, _ = np.histogram(hits, bins=edges)
    return EmpiricalPattern(edges=edges, counts=counts, node_index=node_index)


# --------------------------------------------------------------------------
# spin pairs


@dataclass(frozen=True)
class TwoQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.shape != (4,):
            raise ValueError("a two-spin state has four amplitudes")
        nrm = np.linalg.norm(a)
        if not nrm > 0 or not np.isfinite(nrm):
            raise ValueError("state vector must be nonzero and finite")
        a = a / nrm
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def triplet_zero(cls) -> "TwoQubitState":
        """(|ud> + |du>) with the relative plus sign, normalized."""
        return cls([0, 0.5, 0.5, 0])

    @classmethod
    def singlet(cls) -> "TwoQubitState":
        """(|ud> - |du>) / sqrt(2)."""
        return cls([0, 1, -1, 0])

    @classmethod
    def product(cls, first: Sequence[complex], second: Sequence[complex]) -> "TwoQubitState":
        return cls(np.kron(np.asarray(first, dtype=complex), np.asarray(second, dtype=complex)))


@dataclass(frozen=True)
class MeasurementSetting:
    """Spin measurement axis given by polar angle theta and azimuth phi."""

    theta: float
    phi: float = 0.0

    @classmethod
    def xy(cls, phi: float) -> "MeasurementSetting":
        return cls(math.pi / 2, phi)

    @classmethod
    def from_vector(cls, v) -> "MeasurementSetting":
        v = np.asarray(v, dtype=float)
        r = np.linalg.norm(v)
        if not r > 0:
            raise ValueError("axis must be nonzero")
        # atan2 keeps full precision near the poles, where acos does not
        return cls(math.atan2(math.hypot(v[0], v[1]), v[2]), math.atan2(v[1], v[0]))

    @property
    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def eigenvectors(self) -> tuple[np.ndarray, np.ndarray]:
        """(+1, -1) eigenvectors of n . sigma."""
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([c, e * s]), np.array([-s / e, c])


Z = MeasurementSetting(0.0, 0.0)
X = MeasurementSetting(math.pi / 2, 0.0)


def _axis(a) -> np.ndarray:
    return a.vector if isinstance(a, MeasurementSetting) else np.asarray(a, dtype=float)


def _spin_op(v) -> np.ndarray:
    v = _axis(v)
    return v[0] * PAULI[0] + v[1] * PAULI[1] + v[2] * PAULI[2]


def correlation_E(state: TwoQubitState, a, b) -> float:
    """<psi| (a.sigma) x (b.sigma) |psi>. Axes may be settings or raw 3-vectors."""
    op = np.kron(_spin_op(a), _spin_op(b))
    psi = state.amplitudes
    val = np.vdot(psi, op @ psi)
    if abs(val.imag) > 1e-12:
        raise ArithmeticError(f"correlation has imaginary part {val.imag:.3e}")
    return float(val.real)


def chsh(state: TwoQubitState, settings) -> float:
    """S = E(a,b) - E(a,b') + E(a',b) + E(a',b') for settings (a, a', b, b')."""
    a, a2, b, b2 = settings
    return (correlation_E(state, a, b) - correlation_E(state, a, b2)
            + correlation_E(state, a2, b) + correlation_E(state, a2, b2))


def chsh_settings() -> tuple[MeasurementSetting, ...]:
    """x-y plane azimuths 0, pi/2 (first spin) and pi/4, 3pi/4 (second spin).

    For a state with correlation tensor diag(+1, +1, -1) the correlation is
    cos(phi_a - phi_b), and these angles give S = 2 sqrt(2).
    """
    return tuple(MeasurementSetting.xy(p) for p in (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4))


def lhv_assignment_values() -> np.ndarray:
    """S for each of the 16 deterministic local +/-1 assignments to (a, a', b, b')."""
    vals = []
    for A, A2, B, B2 in itertools.product((1, -1), repeat=4):
        vals.append(A * B - A * B2 + A2 * B + A2 * B2)
    return np.array(vals, dtype=float)


def lhv_bound(settings=None) -> float:
    """Largest |S| any deterministic local strategy reaches.

    A deterministic local model fixes each outcome in advance, so the
    bound does not depend on the measurement axes.
    """
    return float(np.abs(lhv_assignment_values()).max())


@dataclass(frozen=True)
class EPRRun:
    outcomes_a: np.ndarray
    outcomes_b: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return len(self.outcomes_a)

    @property
    def correlation(self) -> float:
        return float(np.mean(self.outcomes_a * self.outcomes_b))

    @property
    def correlation_stderr(self) -> float:
        e = self.correlation
        return math.sqrt(max(1.0 - e * e, 0.0) / self.n)

    def marginal_up(self, which: int = 0) -> float:
        out = self.outcomes_a if which == 0 else self.outcomes_b
        return float(np.mean(out == 1))

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["trial", "outcome_a", "outcome_b"])
            for i, (x, y) in enumerate(zip(self.outcomes_a, self.outcomes_b)):
                w.writerow([i, int(x), int(y)])


def joint_probabilities(state: TwoQubitState, a: MeasurementSetting, b: MeasurementSetting) -> np.ndarray:
    """Born probabilities of (++, +-, -+, --) for axes a and b."""
    ea, eb = a.eigenvectors(), b.eigenvectors()
    p = np.array([abs(np.vdot(np.kron(u, v), state.amplitudes)) ** 2 for u in ea for v in eb])
    return p / p.sum()


def _draw(p: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    # outcomes with zero probability get zero-width intervals and are never drawn
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return np.minimum(idx, 3)


def sample_epr(state: TwoQubitState, a: MeasurementSetting, b: MeasurementSetting, n: int, seed: int,
               stream: Optional[int] = None) -> EPRRun:
    """Draw n joint outcomes (+1/-1 for each spin) from the Born distribution."""
    if n < 1:
        raise ValueError("need at least one trial")
    rng = root_stream(seed) if stream is None else substream(seed, stream)
    idx = _draw(joint_probabilities(state, a, b), n, rng)
    sign = np.array([1, -1], dtype=np.int8)
    return EPRRun(outcomes_a=sign[idx // 2], outcomes_b=sign[idx % 2], seed=int(seed))


def sample_chsh(state: TwoQubitState, settings, n: int, seed: int) -> tuple[float, float]:
    """Sampled S and its standard error; each of the four pairs uses its own sub-stream."""
    a, a2, b, b2 = settings
    pairs = ((a, b, 1), (a, b2, -1), (a2, b, 1), (a2, b2, 1))
    s, var = 0.0, 0.0
    for i, (x, y, sign) in enumerate(pairs):
        run = sample_epr(state, x, y, n, seed, stream=i)
        s += sign * run.correlation
        var += run.correlation_stderr ** 2
    return s, math.sqrt(var)


def sample_lhv_chsh(settings, n: int, seed: int, anti: bool = True) -> tuple[float, float]:
    """S from a local hidden-vector model: a shared random unit vector lam,
    outcomes sign(a.lam) and -sign(b.lam) (or +sign when ``anti`` is False)."""
    a, a2, b, b2 = (_axis(s) for s in settings)
    pairs = ((a, b, 1), (a, b2, -1), (a2, b, 1), (a2, b2, 1))
    s, var = 0.0, 0.0
    for i, (x, y, sign) in enumerate(pairs):
        rng = substream(seed, i)
        lam = rng.standard_normal((n, 3))
        out_a = np.where(lam @ x >= 0, 1, -1)
        out_b = np.where(lam @ y >= 0, 1, -1) * (-1 if anti else 1)
        e = float(np.mean(out_a * out_b))
        s += sign * e
        var += max(1 - e * e, 0.0) / n
    return s, math.sqrt(var)
