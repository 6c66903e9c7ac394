import numpy as np
import pytest

from dualevo.fields import Grid1D, ProbabilityField, normalize
from dualevo.rng import root_stream, substream
from dualevo.stats import chi_square_against, standard_error_mean, standard_error_variance


def test_substreams_match_spawned_children():
    kids = np.random.SeedSequence(99).spawn(4)
    for i, kid in enumerate(kids):
        a = substream(99, i).random(5)
        b = np.random.Generator(np.random.PCG64(kid)).random(5)
        np.testing.assert_array_equal(a, b)


def test_streams_are_distinct_and_reproducible():
    np.testing.assert_array_equal(root_stream(3).random(4), root_stream(3).random(4))
    assert not np.array_equal(substream(3, 0).random(4), substream(3, 1).random(4))
    assert not np.array_equal(root_stream(3).random(4), substream(3, 0).random(4))


@pytest.fixture
def std_normal():
    g = Grid1D.symmetric(8.0, 0.01)
    return normalize(ProbabilityField(g, np.exp(-g.points**2 / 2)))


def test_chi_square_accepts_correct_samples(std_normal):
    x = root_stream(1).standard_normal(20_000)
    res = chi_square_against(x, std_normal)
    assert res.dof == 24 and res.counts.sum() == 20_000
    assert res.passes(0.999)


def test_chi_square_rejects_wrong_width(std_normal):
    x = 1.1 * root_stream(2).standard_normal(20_000)
    assert not chi_square_against(x, std_normal).passes(0.999)


def test_standard_errors_match_normal_theory():
    x = root_stream(4).standard_normal(200_000)
    assert standard_error_mean(x) == pytest.approx(1 / np.sqrt(200_000), rel=0.01)
    # normal data: Var(s^2) ~ 2 sigma^4 / n
    assert standard_error_variance(x) == pytest.approx(np.sqrt(2 / 200_000), rel=0.02)
