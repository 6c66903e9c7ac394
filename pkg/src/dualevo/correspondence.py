"""Bridges between the classical and quantum descriptions.

- ground-state matching: the OU stationary density equals the squared
  harmonic ground state when a1 = D * lambda;
- free spreading: diffusion variance grows linearly, a free quantum
  packet's variance quadratically;
- the de Boer parameter of a gas.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .fields import Grid1D, distance
from .fokker_planck import FPParams, ou_stationary
from .schrodinger import QuantumParams, born_probability, gamma_of_t, harmonic_ground_state

__all__ = [
    "MatchResult",
    "GasParams",
    "SpreadTable",
    "match_ground_state",
    "spread_compare",
    "spread_crossover",
    "de_boer",
]


@dataclass(frozen=True)
class MatchResult:
    kappa: float
    lambda_: float
    a1: float
    linf_density_gap: float

    @property
    def matched(self) -> bool:
        return math.isclose(self.kappa, self.lambda_, rel_tol=1e-12)


def match_ground_state(q: QuantumParams, D: float, grid: Grid1D) -> MatchResult:
    """Choose a1 = D * sqrt(4 m b) / hbar and compare the two densities on ``grid``."""
    if D <= 0:
        raise ValueError("diffusion coefficient must be positive")
    psi0, gs = harmonic_ground_state(q, grid)
    a1 = D * gs.lambda_
    fp = FPParams(a1=a1, D=D)
    gap = distance(ou_stationary(fp, grid), born_probability(psi0), "Linf")
    return MatchResult(kappa=fp.kappa, lambda_=gs.lambda_, a1=a1, linf_density_gap=gap)


@dataclass(frozen=True)
class SpreadTable:
    t: np.ndarray
    var_diffusion: np.ndarray
    var_quantum: np.ndarray

    @property
    def ratio(self) -> np.ndarray:
        """Quantum over diffusion variance."""
        return self.var_quantum / self.var_diffusion

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "var_diffusion", "var_quantum", "ratio"])
            for row in zip(self.t, self.var_diffusion, self.var_quantum, self.ratio):
                w.writerow([format(float(v), ".17g") for v in row])


def spread_compare(alpha: float, D: float, q: QuantumParams, t_list, sigma0_sq: float | None = None) -> SpreadTable:
    """Per-axis variances: sigma0^2 + 2 D t against 1 / (2 gamma(t)).

    ``sigma0_sq`` defaults to alpha / 2, the variance of the quantum packet
    at t = 0, so both columns start from the same spread.
    """
    if alpha <= 0 or D <= 0:
        raise ValueError("alpha and D must be positive")
    t = np.asarray(t_list, dtype=float)
    if np.any(t < 0):
        raise ValueError("times must be nonnegative")
    s0 = alpha / 2.0 if sigma0_sq is None else sigma0_sq
    var_d = s0 + 2.0 * D * t
    var_q = np.array([1.0 / (2.0 * gamma_of_t(alpha, tk, q)) for tk in t])
    return SpreadTable(t=t, var_diffusion=var_d, var_quantum=var_q)


def spread_crossover(alpha: float, D: float, q: QuantumParams, sigma0_sq: float | None = None) -> float:
    """Time after which the quantum variance exceeds the diffusion variance (root bracketing)."""
    s0 = alpha / 2.0 if sigma0_sq is None else sigma0_sq

    def gap(t):
        tab = spread_compare(alpha, D, q, [t], s0)
        return float(tab.var_quantum[0] - tab.var_diffusion[0])

    # gap is convex in t with its minimum at t_min; the crossover is the root beyond it
    t_min = 2.0 * D * alpha * q.m**2 / q.hbar**2
    if gap(t_min) >= 0:
        return 0.0
    hi = 2.0 * t_min
    while gap(hi) <= 0:
        hi *= 2.0
    return brentq(gap, t_min, hi, xtol=1e-14, rtol=1e-14)


@dataclass(frozen=True)
class GasParams:
    h: float
    sigma: float
    m: float
    epsilon: float

    def __post_init__(self):
        if min(self.h, self.sigma, self.m, self.epsilon) <= 0:
            raise ValueError("gas parameters must be strictly positive")


def de_boer(g: GasParams) -> float:
    """Lambda = h / (sigma sqrt(m epsilon))."""
    return g.h / (g.sigma * math.sqrt(g.m * g.epsilon))
