import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umedian.costhat import costhat_many
from umedian.errors import InvalidInputError
from umedian.model import UncertainPointSet
from umedian.oracle import coverage_audit
from umedian.support1d import alpha_of, build_support_1d, cover_factor, size_bound_1d

from conftest import random_instance_1d


def test_all_equal_locations():
    T = build_support_1d(UncertainPointSet.from_nested([[2.0, 2.0], [2.0, 2.0]]), 0.5)
    assert T.points.ravel().tolist() == [2.0]
    assert T.radius.tolist() == [0.0]


def test_hand_trace_two_locations():
    T = build_support_1d(UncertainPointSet.from_nested([[0.0, 10.0]]), 1.0)
    assert T.points.ravel().tolist() == [0.0, 10.0]


def test_rejects_bad_epsilon():
    P = UncertainPointSet.from_nested([[0.0, 10.0]])
    with pytest.raises(InvalidInputError):
        build_support_1d(P, 0.0)
    with pytest.raises(InvalidInputError):
        build_support_1d(UncertainPointSet(np.zeros((2, 2, 2))), 0.1)


def test_coverage_of_all_traversal_medians(rng):
    P = random_instance_1d(rng, 5, 3)
    T = build_support_1d(P, 0.1)
    assert coverage_audit(P, T).passed


def test_alpha_examples():
    assert alpha_of(UncertainPointSet.from_nested([[0.0], [10.0]])) == 2.0
    assert alpha_of(UncertainPointSet.from_nested([[1.0, 1.0], [1.0, 1.0]])) == math.inf


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12), st.integers(1, 5), st.integers(0, 2 ** 32 - 1), st.booleans(),
       st.sampled_from([0.05, 0.1, 0.3, 1.0]))
def test_greedy_invariants(n, k, seed, ties, eps):
    rng = np.random.default_rng(seed)
    P = random_instance_1d(rng, n, k, ties=ties)
    T = build_support_1d(P, eps)
    z = T.points[:, 0]
    assert z[0] == P.locations.min()
    assert np.all(np.diff(z) > 0)
    assert np.all(np.diff(z) > T.radius[:-1])
    assert np.allclose(T.costhat, costhat_many(z, P), atol=1e-12)
    assert set(z.tolist()) <= set(P.locations.ravel().tolist())
    flat = P.locations.ravel()
    gap = np.abs(flat[:, None] - z[None, :])
    assert np.all((gap <= T.radius[None, :] * (1 + 1e-12)).any(axis=1))
    alpha = alpha_of(P)
    if math.isfinite(alpha):
        assert len(T) <= size_bound_1d(alpha, k, eps)


def test_monotone_in_epsilon(rng):
    for _ in range(10):
        P = random_instance_1d(rng, 30, 4)
        sizes = [len(build_support_1d(P, e)) for e in (1.0, 0.5, 0.2, 0.1, 0.05, 0.01)]
        assert sizes == sorted(sizes)


def test_cover_factor():
    assert cover_factor(1.0) == 0.5
