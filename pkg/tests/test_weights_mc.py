import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from umedian.errors import AuditFailure, InvalidInputError
from umedian.model import UncertainPointSet
from umedian.oracle import enumerate_binned
from umedian.support1d import SupportSet, build_support_1d
from umedian.support2d import build_lattice, build_support_2d, rho_lower_bound
from umedian.weights_exact import aggregate_weights, point_weights_1d
from umedian.weights_mc import (McConfig, map_f_T_general, mc_weights, round_medians, rounds_needed,
                                sampled_support)

from conftest import random_instance_1d, random_instance_2d


def test_rounds_needed_examples():
    assert rounds_needed(1.0, math.exp(-1), 1, 1.0) == 2
    assert rounds_needed(0.1, 0.05, 2, 4.0) == 1999
    assert rounds_needed(0.05, math.exp(-1), 1, 1.0) == 4 * rounds_needed(0.1, math.exp(-1), 1, 1.0)
    for bad in ((0.0, 0.1, 1), (0.1, 1.0, 1), (0.1, 0.1, 0)):
        with pytest.raises(InvalidInputError):
            rounds_needed(*bad)


def test_config_validation():
    with pytest.raises(InvalidInputError):
        McConfig(0.1, phi=0.2)
    with pytest.raises(InvalidInputError):
        McConfig(0.1, rounds=0)
    assert McConfig(0.2).resolved_phi(2) == pytest.approx(0.02)
    assert McConfig(0.2).resolved_phi(1) == 0.0


def _T(points):
    pts = np.asarray(points, float)
    return SupportSet(pts, np.ones(len(pts)), 1.0, "manual", radius=np.full(len(pts), 0.5))


def test_map_general():
    T = _T([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert map_f_T_general([1.0, 0.0], T, 1.0) == 1
    assert map_f_T_general([0.5, 0.5], T, 1.0) == -1
    T2 = SupportSet(np.array([[1.0, 0.0], [0.0, 1.0]]), np.full(2, 4.0), 1.0, "manual")
    assert map_f_T_general([0.5, 0.5], T2, 1.0) == 1
    assert map_f_T_general([50.0, 50.0], T2, 1.0) == -1


def test_k1_point_mass():
    P = UncertainPointSet.from_nested([[1.0], [5.0], [2.0]])
    d = mc_weights(P, build_support_1d(P, 0.1), McConfig(0.1, rounds=50))
    assert d.value_masses()[2.0] == 1.0
    s = sampled_support(P, McConfig(0.1, rounds=50))
    assert s.locs.ravel().tolist() == [2.0] and s.weights == (1.0,)


def test_tied3_hoeffding(tied3):
    cfg = McConfig(0.1, delta=0.05, seed=3)
    N = cfg.resolved_rounds(1)
    d = mc_weights(tied3, build_support_1d(tied3, 0.1), cfg)
    tol = 3 * math.sqrt(math.log(2 / 0.05) / (2 * N))
    assert abs(d.value_masses()[0.0] - 0.5) <= tol
    assert d.uncovered_mass == 0.0
    s = sampled_support(tied3, cfg)
    assert s.locs.ravel().tolist() == [0.0, 1.0]
    assert abs(s.weights[0] - 0.5) <= tol


def test_seed_determinism_and_worker_independence(monkeypatch, rng):
    P = random_instance_1d(rng, 7, 3)
    T = build_support_1d(P, 0.2)
    cfg = McConfig(0.2, rounds=3000, seed=11)
    monkeypatch.setenv("UMEDIAN_THREADS", "1")
    a = mc_weights(P, T, cfg)
    monkeypatch.setenv("UMEDIAN_THREADS", "3")
    b = mc_weights(P, T, cfg)
    assert a.weights == b.weights
    assert abs(sum(a.weights) + a.uncovered_mass - 1) <= 1e-12


def test_sampled_support_tv(rng):
    P = random_instance_1d(rng, 5, 2)
    eps = 0.1
    exact = {v: float(m) for v, m in point_distribution_masses(P).items()}
    s = sampled_support(P, McConfig(eps, seed=1)).value_masses()
    keys = set(exact) | set(s)
    assert 0.5 * sum(abs(exact.get(x, 0) - s.get(x, 0)) for x in keys) <= eps


def point_distribution_masses(P):
    from umedian.weights_exact import point_distribution
    return point_distribution(point_weights_1d(P), P).value_masses()


def test_mc_matches_exact_1d(rng):
    P = random_instance_1d(rng, 6, 3)
    T = build_support_1d(P, 0.1)
    exact = np.array([float(w) for w in aggregate_weights(point_weights_1d(P), P, T).weights])
    est = mc_weights(P, T, McConfig(0.1, seed=2))
    assert np.abs(est.float_weights() - exact).max() <= 0.1


def test_2d_against_oracle(rng):
    P = random_instance_2d(rng, 4, 2)
    eps = 0.5
    T = build_support_2d(build_lattice(P, eps, rho_lower_bound(P)), P)
    truth = enumerate_binned(P, T, phi=eps / 10)
    assert truth.uncovered_mass == 0.0
    assert sum(truth.weights) == 1
    exact = truth.float_weights()
    good = 0
    for s in range(100):
        est = mc_weights(P, T, McConfig(eps, delta=0.05, seed=s))
        assert est.uncovered_mass == 0.0
        good += np.abs(est.float_weights() - exact).max() <= eps
    assert good >= 95


def test_miss_warning_and_strict(rng):
    P = random_instance_1d(rng, 5, 2)
    T = SupportSet(np.array([[100.0]]), np.array([1.0]), 0.1, "manual")
    with pytest.warns(RuntimeWarning, match="not covered"):
        d = mc_weights(P, T, McConfig(0.1, rounds=100))
    assert d.uncovered_mass == 1.0
    with pytest.raises(AuditFailure):
        mc_weights(P, T, McConfig(0.1, rounds=100, strict=True))


def test_empty_support_falls_back(tied3):
    d = mc_weights(tied3, None, McConfig(0.1, rounds=500))
    assert d.meta["mode"] == "sampled"


def test_round_medians_shapes(rng):
    P2 = random_instance_2d(rng, 3, 2)
    assert round_medians(P2, 10, 0, 0.01).shape == (10, 2)
    P1 = random_instance_1d(rng, 3, 2)
    idx = round_medians(P1, 10, 0)
    assert idx.shape == (10,) and idx.max() < 6
