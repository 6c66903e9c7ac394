"""Goodness-of-fit helpers shared by the sampler checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .fields import ProbabilityField, sample_positions

__all__ = ["ChiSquareResult", "chi_square_against", "standard_error_mean", "standard_error_variance"]


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    counts: np.ndarray

    def passes(self, level: float = 0.999) -> bool:
        return self.p_value > 1.0 - level


def chi_square_against(samples, density: ProbabilityField, n_bins: int = 25) -> ChiSquareResult:
    """Pearson chi-square of ``samples`` against a gridded density.

    Bins are equal-probability under ``density`` (edges from its inverse
    CDF); the outer bins are open so samples off the grid still count.
    """
    if n_bins < 2:
        raise ValueError("need at least two bins")
    samples = np.asarray(samples, dtype=float)
    inner = sample_positions(density, np.arange(1, n_bins) / n_bins)
    idx = np.searchsorted(inner, samples, side="right")
    counts = np.bincount(idx, minlength=n_bins)
    expected = len(samples) / n_bins
    stat = float(np.sum((counts - expected) ** 2) / expected)
    dof = n_bins - 1
    return ChiSquareResult(stat, dof, float(chi2.sf(stat, dof)), counts)


def standard_error_mean(samples) -> float:
    samples = np.asarray(samples, dtype=float)
    return float(samples.std(ddof=1) / np.sqrt(len(samples)))


def standard_error_variance(samples) -> float:
    """Large-sample standard error of the sample variance (uses the fourth central moment)."""
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    c = samples - samples.mean()
    m2 = np.mean(c**2)
    m4 = np.mean(c**4)
    return float(np.sqrt(max(m4 - m2**2 * (n - 3) / (n - 1), 0.0) / n))
