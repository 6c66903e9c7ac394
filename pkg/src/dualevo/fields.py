"""Uniform 1-D grids and the fields that live on them.

Fields store point densities (not cell masses). Every integral is an
explicit trapezoid quadrature over the grid, so conservation statements
are independent of the grid spacing.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

__all__ = [
    "Grid1D",
    "ProbabilityField",
    "AmplitudeField",
    "DiscreteDistribution",
    "DegenerateFieldError",
    "trapezoid",
    "normalize",
    "moment",
    "variance",
    "distance",
    "cell_masses",
    "sample_positions",
    "inverse_cdf",
    "write_field_csv",
    "read_field_csv",
]


class DegenerateFieldError(ValueError):
    """Raised when a field has zero or non-finite total weight."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"grid needs an integer n >= 3, got {self.n}")
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_points(cls, x) -> "Grid1D":
        """Build a grid from explicit coordinates; rejects non-uniform spacing."""
        x = np.asarray(x, dtype=float)
        grid = cls(float(x[0]), float(x[-1]), len(x))
        if not np.allclose(x, grid.points, rtol=0.0, atol=1e-9 * grid.dx):
            raise ValueError("only uniform grids are supported")
        return grid

    @classmethod
    def symmetric(cls, half_width: float, dx: float) -> "Grid1D":
        """Grid on [-half_width, half_width] with spacing close to ``dx`` and a node at 0."""
        cells = 2 * int(np.ceil(half_width / dx))
        return cls(-half_width, half_width, cells + 1)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights."""
        w = np.full(self.n, self.dx)
        w[0] = w[-1] = 0.5 * self.dx
        return w


def trapezoid(values, grid: Grid1D):
    values = np.asarray(values)
    return grid.dx * (values.sum() - 0.5 * (values[0] + values[-1]))


@dataclass(frozen=True)
class ProbabilityField:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("probability density must be finite")
        if np.any(v < 0):
            raise ValueError(f"probability density has negative entries (min {v.min():.3e})")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def total(self) -> float:
        return float(trapezoid(self.values, self.grid))


@dataclass(frozen=True)
class AmplitudeField:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("amplitude must be finite")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def norm2(self) -> float:
        """Trapezoid integral of |psi|^2."""
        return float(trapezoid(np.abs(self.values) ** 2, self.grid))


@dataclass(frozen=True)
class DiscreteDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("a distribution needs a non-empty 1-D probability vector")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", _frozen(p))

    @classmethod
    def point(cls, n_states: int, state: int) -> "DiscreteDistribution":
        p = np.zeros(n_states)
        p[state] = 1.0
        return cls(p)

    def __len__(self) -> int:
        return len(self.probs)


Field = Union[ProbabilityField, AmplitudeField, DiscreteDistribution]


def normalize(f):
    """Rescale a field so that its total probability is 1."""
    if isinstance(f, ProbabilityField):
        total = trapezoid(f.values, f.grid)
        scale = total
    elif isinstance(f, AmplitudeField):
        total = trapezoid(np.abs(f.values) ** 2, f.grid)
        scale = np.sqrt(total)
    else:
        raise TypeError(f"cannot normalize {type(f).__name__}")
    if not np.isfinite(total) or total <= 0:
        raise DegenerateFieldError("degenerate field")
    return type(f)(f.grid, f.values / scale)


def moment(f: ProbabilityField, k: int) -> float:
    """Trapezoid estimate of the k-th raw moment."""
    if k < 0 or int(k) != k:
        raise ValueError("moment order must be a nonnegative integer")
    return float(trapezoid(f.x ** int(k) * f.values, f.grid))


def variance(f: ProbabilityField) -> float:
    m0 = moment(f, 0)
    mean = moment(f, 1) / m0
    return float(trapezoid((f.x - mean) ** 2 * f.values, f.grid) / m0)


def distance(f: Field, g: Field, metric: str = "Linf") -> float:
    """Linf, L1 or TV (= L1/2) distance between two fields on the same support."""
    if type(f) is not type(g):
        raise TypeError("fields must have the same type")
    if isinstance(f, DiscreteDistribution):
        if len(f) != len(g):
            raise ValueError("state sets differ")
        diff = np.abs(f.probs - g.probs)
        l1 = diff.sum()
    else:
        if f.grid != g.grid:
            raise ValueError("grid mismatch")
        diff = np.abs(f.values - g.values)
        l1 = trapezoid(diff, f.grid)
    if metric == "Linf":
        return float(diff.max())
    if metric == "L1":
        return float(l1)
    if metric == "TV":
        return float(0.5 * l1)
    raise ValueError(f"unknown metric {metric!r}")


def cell_masses(f: ProbabilityField) -> np.ndarray:
    """Probability of each of the n-1 grid cells under the trapezoid rule."""
    v = f.values
    return 0.5 * f.grid.dx * (v[:-1] + v[1:])


def sample_positions(f: ProbabilityField, u) -> np.ndarray:
    """Inverse-CDF sampling: map uniforms ``u`` in [0, 1) to positions.

    The cumulative distribution is the running sum of trapezoid cell
    masses, interpolated linearly inside each cell.
    """
    return inverse_cdf(f.values, f.grid, u)


def inverse_cdf(density: np.ndarray, grid: Grid1D, u) -> np.ndarray:
    """Array-level core of :func:`sample_positions`; ``density`` need not be normalized."""
    masses = 0.5 * grid.dx * (density[:-1] + density[1:])
    cdf = np.concatenate(([0.0], np.cumsum(masses)))
    cdf /= cdf[-1]
    u = np.asarray(u, dtype=float)
    cell = np.searchsorted(cdf, u, side="right") - 1
    cell = np.clip(cell, 0, len(masses) - 1)
    # zero-mass cells have zero width in the CDF and are never selected by searchsorted
    span = cdf[cell + 1] - cdf[cell]
    frac = np.where(span > 0, (u - cdf[cell]) / np.where(span > 0, span, 1.0), 0.5)
    return grid.x_min + (cell + frac) * grid.dx


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_field_csv(f: Union[ProbabilityField, AmplitudeField], path) -> None:
    """Dump a field as ``x,value`` (real) or ``x,re,im`` (amplitude) at 17 significant digits."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if isinstance(f, AmplitudeField):
            w.writerow(["x", "re", "im"])
            for x, v in zip(f.x, f.values):
                w.writerow([_fmt(x), _fmt(v.real), _fmt(v.imag)])
        else:
            w.writerow(["x", "value"])
            for x, v in zip(f.x, f.values):
                w.writerow([_fmt(x), _fmt(v)])


def read_field_csv(path) -> Union[ProbabilityField, AmplitudeField]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    grid = Grid1D.from_points(body[:, 0])
    if header == ["x", "re", "im"]:
        return AmplitudeField(grid, body[:, 1] + 1j * body[:, 2])
    if header == ["x", "value"]:
        return ProbabilityField(grid, body[:, 1])
    raise ValueError(f"unrecognized field header {header}")
