from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from umedian.errors import InvalidInputError
from umedian.estimate import nonrobustness_demo, median_gap, weighted_median_1d
from umedian.model import MedianDistribution, UncertainPointSet

from conftest import random_instance_1d


def dist(points, weights, kind="exact"):
    return MedianDistribution(np.array(points, float)[:, None], weights, kind=kind)


def test_examples():
    assert weighted_median_1d(dist([4.0], [F(1)])) == 4.0
    assert weighted_median_1d(dist([0.0, 2.0], [F(1, 2), F(1, 2)])) == 0.0
    assert weighted_median_1d(dist([1.0, 2.0, 3.0], [F(1, 5), F(1, 5), F(3, 5)])) == 3.0
    assert weighted_median_1d(dist([3.0, 1.0, 2.0], [0.6, 0.2, 0.2], "floating")) == 3.0
    assert weighted_median_1d(dist([0.0, 2.0], [0.5, 0.5], "floating")) == 0.0


def test_errors():
    with pytest.raises(InvalidInputError):
        weighted_median_1d(MedianDistribution(np.zeros((0, 1)), [], kind="floating"))
    with pytest.raises(InvalidInputError):
        weighted_median_1d(MedianDistribution(np.zeros((1, 2)), [F(1)], kind="exact"))


@given(st.lists(st.integers(1, 20), min_size=1, max_size=8), st.floats(-100, 100), st.floats(0.1, 10))
def test_equivariance(counts, shift, scale):
    pts = np.arange(len(counts), dtype=float) * 1.7
    w = [F(c, sum(counts)) for c in counts]
    m = weighted_median_1d(dist(pts, w))
    assert m in pts.tolist()
    m2 = weighted_median_1d(dist(pts * scale + shift, w))
    assert m2 == pytest.approx(m * scale + shift)


def test_median_gap_k1():
    P = UncertainPointSet.from_nested([[3.0], [9.0], [1.0], [4.0]])
    rep = median_gap(P, 0.1)
    assert rep.m_T == rep.m_P == 3.0 and rep.gap == 0.0


def test_median_gap_tied3(tied3):
    rep = median_gap(tied3, 0.01)
    assert rep.m_T == rep.m_P == 0.0 and rep.gap == 0.0


def test_median_gap_random(rng):
    for _ in range(50):
        P = random_instance_1d(rng, int(rng.integers(1, 7)), int(rng.integers(1, 4)))
        for eps in (0.05, 0.3, 1.0):
            assert median_gap(P, eps).holds


def test_nonrobustness():
    r0 = nonrobustness_demo(2.0, 0)
    assert r0["m_P"] == 0.0 and r0["m_P_perturbed"] == 0.0
    r = nonrobustness_demo(2.0, F(1, 10 ** 9))
    assert r["perturbed_distribution"][0.0] == F(1, 2) - F(1, 10 ** 9)
    assert r["m_P_perturbed"] == 2.0
    assert r["total_variation"] <= F(1, 10 ** 9)
    with pytest.raises(InvalidInputError):
        nonrobustness_demo(0.0)
