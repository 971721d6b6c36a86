from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from umedian.model import UncertainPointSet, make_rng


def random_instance_1d(rng, n, k, ties=False, scale=10.0):
    if ties:
        locs = rng.integers(0, 4, size=(n, k)).astype(float)
    else:
        locs = rng.uniform(0.0, scale, size=(n, k))
    return UncertainPointSet(locs[:, :, None])


def random_instance_2d(rng, n, k, scale=10.0):
    return UncertainPointSet(rng.uniform(0.0, scale, size=(n, k, 2)))


def brute_point_weights(P):
    """Plain-Python count of LexKey lower medians over all traversals."""
    n, k = P.n, P.k
    vals = P.locations[:, :, 0].tolist()
    cnt = {}
    for ch in product(range(k), repeat=n):
        keys = sorted((vals[i][ch[i]], i, ch[i]) for i in range(n))
        m = keys[(n - 1) // 2]
        cnt[m[1:]] = cnt.get(m[1:], 0) + 1
    return [[Fraction(cnt.get((i, j), 0), k ** n) for j in range(k)] for i in range(n)]


def small_suite_1d(count=50, seed=1234):
    """Random n <= 6, k <= 3 instances (half with coordinate ties) plus boundary shapes."""
    rng = make_rng(seed)
    out = []
    for t in range(count):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, 4))
        out.append(random_instance_1d(rng, n, k, ties=bool(t % 2)))
    out += [
        UncertainPointSet.from_nested([[2.5, -1.0, 7.0]]),
        UncertainPointSet.from_nested([[3.0], [1.0], [4.0], [1.5]]),
        UncertainPointSet.from_nested([[2.0, 2.0], [2.0, 2.0], [2.0, 2.0]]),
        UncertainPointSet.from_nested([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
    ]
    return out


@pytest.fixture
def tied3():
    return UncertainPointSet.from_nested([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
