"""Discrete-state master equation.

Convention: ``H[x, y]`` for ``x != y`` is the rate of jumping from state
``y`` to state ``x``. Columns therefore hold outgoing rates, and the
diagonal is minus the total exit rate so that every column sums to zero.
A distribution evolves as ``dp/dt = H @ p``.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import expm
from scipy.sparse.csgraph import connected_components

from .fields import DiscreteDistribution, distance
from .rng import substream

__all__ = [
    "RateGenerator",
    "GeneratorDiagnostics",
    "SpectrumReport",
    "TrajectoryRecord",
    "ConservationError",
    "ClippingWarning",
    "validate_generator",
    "propagate",
    "propagator",
    "spectrum",
    "is_irreducible",
    "chapman_kolmogorov_check",
    "gillespie_sample",
    "gillespie_ensemble",
    "empirical_distribution",
    "sampler_tv",
    "random_generator",
    "read_generator_csv",
    "write_generator_csv",
]

COLUMN_SUM_TOL = 1e-12
ZERO_EIG_TOL = 1e-9
NEG_CLIP_TOL = 1e-12
CONSERVATION_TOL = 1e-10


class ConservationError(ArithmeticError):
    """Propagated probabilities left the round-off envelope."""


class ClippingWarning(RuntimeWarning):
    """Tiny negative probabilities were clipped to zero."""


@dataclass(frozen=True)
class RateGenerator:
    """Generator of a continuous-time Markov chain.

    ``rates`` is read for its off-diagonal entries only; the diagonal is
    recomputed from the column sums.
    """

    rates: np.ndarray
    H: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.array(self.rates, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"rate matrix must be square, got shape {w.shape}")
        np.fill_diagonal(w, 0.0)
        if not np.all(np.isfinite(w)):
            raise ValueError("rates must be finite")
        if np.any(w < 0):
            i, j = np.argwhere(w < 0)[0]
            raise ValueError(f"negative rate W({i}|{j}) = {w[i, j]}")
        H = w - np.diag(w.sum(axis=0))
        w.setflags(write=False)
        H.setflags(write=False)
        object.__setattr__(self, "rates", w)
        object.__setattr__(self, "H", H)

    @classmethod
    def from_matrix(cls, H) -> "RateGenerator":
        """Adopt a full generator matrix after checking it."""
        diag = validate_generator(H)
        if not diag.ok:
            raise ValueError("invalid generator: " + "; ".join(diag.issues))
        return cls(np.asarray(H, dtype=float))

    @property
    def n_states(self) -> int:
        return self.H.shape[0]

    def exit_rates(self) -> np.ndarray:
        return -np.diag(self.H).copy()


@dataclass(frozen=True)
class GeneratorDiagnostics:
    ok: bool
    column_sums: np.ndarray
    bad_columns: tuple
    negative_entries: tuple
    issues: tuple

    def __bool__(self) -> bool:
        return self.ok


def validate_generator(g) -> GeneratorDiagnostics:
    """Check off-diagonal nonnegativity and vanishing column sums."""
    H = g.H if isinstance(g, RateGenerator) else np.asarray(g, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"generator must be square, got shape {H.shape}")
    sums = H.sum(axis=0)
    bad_cols = tuple(int(j) for j in np.flatnonzero(np.abs(sums) >= COLUMN_SUM_TOL))
    off = H - np.diag(np.diag(H))
    neg = tuple((int(i), int(j)) for i, j in np.argwhere(off < 0))
    issues = [f"column {j} sums to {sums[j]:.17g}" for j in bad_cols]
    issues += [f"entry ({i}, {j}) is negative: {H[i, j]:.17g}" for i, j in neg]
    return GeneratorDiagnostics(
        ok=not issues,
        column_sums=sums,
        bad_columns=bad_cols,
        negative_entries=neg,
        issues=tuple(issues),
    )


def propagator(g: RateGenerator, t: float) -> np.ndarray:
    """Transition matrix exp(tH); scaling-and-squaring with a degree-13 Pade approximant."""
    if t < 0:
        raise ValueError("propagation time must be nonnegative")
    if t == 0:
        return np.eye(g.n_states)
    return expm(t * g.H)


def _settle(p: np.ndarray) -> np.ndarray:
    """Clip round-off negatives and renormalize, or abort on real violations."""
    total = p.sum()
    if abs(total - 1.0) > CONSERVATION_TOL:
        raise ConservationError(f"conservation violated: total probability {total!r}")
    low = p.min()
    if low < -NEG_CLIP_TOL:
        raise ConservationError(f"conservation violated: probability {low!r} < 0")
    if low < 0:
        warnings.warn(f"clipped negative probability {low:.3e}", ClippingWarning, stacklevel=3)
        p = np.clip(p, 0.0, None)
    return p / p.sum()


def propagate(g: RateGenerator, p0: DiscreteDistribution, t: float) -> DiscreteDistribution:
    if t < 0:
        raise ValueError("propagation time must be nonnegative")
    if len(p0) != g.n_states:
        raise ValueError("distribution and generator sizes differ")
    if t == 0:
        return p0
    return DiscreteDistribution(_settle(propagator(g, t) @ p0.probs))


def is_irreducible(g: RateGenerator) -> bool:
    """True when the graph of nonzero rates is strongly connected."""
    adj = (g.rates > 0).astype(int)
    n_comp, _ = connected_components(adj, directed=True, connection="strong")
    return n_comp == 1


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    n_zero: int
    irreducible: bool
    classification: str
    ok: bool


def spectrum(g: RateGenerator) -> SpectrumReport:
    """Eigenvalues sorted by decreasing real part, with the zero-mode count.

    For an irreducible chain ``ok`` asserts exactly one eigenvalue within
    1e-9 of zero and all others with negative real part. Reducible chains
    are reported as such; they may carry several zero modes.
    """
    ev = np.linalg.eigvals(g.H)
    ev = ev[np.lexsort((ev.imag, -ev.real))]
    zero = np.abs(ev) < ZERO_EIG_TOL
    n_zero = int(zero.sum())
    irreducible = is_irreducible(g)
    rest_decay = bool(np.all(ev[~zero].real < -ZERO_EIG_TOL))
    if irreducible:
        ok = n_zero == 1 and rest_decay
        classification = "irreducible"
    else:
        ok = n_zero >= 1 and rest_decay
        classification = "reducible"
    return SpectrumReport(ev, n_zero, irreducible, classification, ok)


def chapman_kolmogorov_check(g: RateGenerator, t1: float, t2: float) -> float:
    """Max-norm gap between exp((t1+t2)H) and exp(t2 H) exp(t1 H)."""
    direct = propagator(g, t1 + t2)
    composed = propagator(g, t2) @ propagator(g, t1)
    return float(np.max(np.abs(direct - composed)))


@dataclass(frozen=True)
class TrajectoryRecord:
    """Time-stamped jump record. ``events[0]`` is at t = 0; times strictly increase.

    The record covers [0, t_end]; the state after the last event persists
    until t_end.
    """

    seed: int
    events: tuple
    t_end: float
    index: int = 0

    def __post_init__(self):
        times = [e[0] for e in self.events]
        if not times or times[0] != 0.0:
            raise ValueError("a trajectory starts with an event at t = 0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("event times must be strictly increasing")

    @property
    def times(self) -> np.ndarray:
        return np.array([e[0] for e in self.events])

    @property
    def values(self) -> np.ndarray:
        return np.array([e[1] for e in self.events])

    def state_at(self, t: float):
        if t < 0 or t > self.t_end:
            raise ValueError(f"t = {t} outside [0, {self.t_end}]")
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        return self.events[k][1]

    def write_csv(self, path, value_name: str = "state") -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", value_name])
            for t, v in self.events:
                w.writerow([format(float(t), ".17g"), v if isinstance(v, (int, np.integer)) else format(float(v), ".17g")])


class _JumpTables:
    def __init__(self, g: RateGenerator):
        self.exit = g.exit_rates()
        with np.errstate(invalid="ignore", divide="ignore"):
            jump = g.rates / self.exit[np.newaxis, :]
        self.cum = np.cumsum(np.nan_to_num(jump), axis=0)


def _run_chain(tables: _JumpTables, x0: int, t_end: float, rng: np.random.Generator):
    t, x = 0.0, int(x0)
    events = [(0.0, x)]
    while True:
        rate = tables.exit[x]
        if rate <= 0:
            break
        t += rng.exponential(1.0 / rate)
        if t > t_end:
            break
        col = tables.cum[:, x]
        x = int(np.searchsorted(col, rng.random() * col[-1], side="right"))
        events.append((t, x))
    return events


def gillespie_sample(g: RateGenerator, x0: int, t_end: float, seed: int, index: int = 0) -> TrajectoryRecord:
    """Kinetic Monte Carlo trajectory on sub-stream ``index`` of ``seed``.

    Waiting times are exponential with the exit rate of the current state;
    the destination is drawn proportionally to the outgoing rates. An
    absorbing state simply holds until ``t_end``.
    """
    if not validate_generator(g).ok:
        raise ValueError("invalid generator")
    if not 0 <= x0 < g.n_states:
        raise ValueError(f"state {x0} out of range")
    events = _run_chain(_JumpTables(g), x0, t_end, substream(seed, index))
    return TrajectoryRecord(seed=int(seed), events=tuple(events), t_end=float(t_end), index=int(index))


def gillespie_ensemble(g: RateGenerator, x0: int, t: float, n: int, seed: int) -> np.ndarray:
    """States at time ``t`` of ``n`` independent trajectories (trajectory i uses sub-stream i)."""
    tables = _JumpTables(g)
    out = np.empty(n, dtype=int)
    for i in range(n):
        out[i] = _run_chain(tables, x0, t, substream(seed, i))[-1][1]
    return out


def empirical_distribution(states: np.ndarray, n_states: int) -> DiscreteDistribution:
    counts = np.bincount(states, minlength=n_states)
    return DiscreteDistribution(counts / counts.sum())


def sampler_tv(g: RateGenerator, x0: int, t: float, n: int, seed: int) -> float:
    """TV distance between a Gillespie ensemble at time t and the propagated distribution."""
    emp = empirical_distribution(gillespie_ensemble(g, x0, t, n, seed), g.n_states)
    exact = propagate(g, DiscreteDistribution.point(g.n_states, x0), t)
    return distance(emp, exact, "TV")


def random_generator(n_states: int, rng: np.random.Generator, density: float = 1.0) -> RateGenerator:
    """Random irreducible generator with exponential(1) rates.

    With ``density < 1`` each off-diagonal rate is kept with that
    probability; draws are repeated until the chain is irreducible.
    """
    while True:
        w = rng.exponential(1.0, size=(n_states, n_states))
        if density < 1.0:
            w *= rng.random((n_states, n_states)) < density
        g = RateGenerator(w)
        if is_irreducible(g):
            return g


def read_generator_csv(path) -> RateGenerator:
    """Read a CSV matrix of off-diagonal rates; the diagonal column is ignored."""
    rows = []
    with Path(path).open(newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            rows.append([float(v) for v in row])
    return RateGenerator(np.array(rows))


def write_generator_csv(g: RateGenerator, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in g.rates:
            w.writerow([format(float(v), ".17g") for v in row])
