"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single ``ACCEPTANCE <id> PASS|FAIL`` line to the terminal.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from umedian.costhat import build_profile_1d
from umedian.estimate import nonrobustness_demo, tied_instance, median_gap, weighted_median_1d
from umedian.generators import C0Family1D, experiment_min_costhat_1d, experiment_min_costhat_2d, required_n_1d, required_n_2d
from umedian.l1median import l1_median
from umedian.model import UncertainPointSet, make_rng
from umedian.oracle import coverage_audit, enumerate_point_weights
from umedian.support1d import alpha_of, build_support_1d, size_bound_1d
from umedian.support2d import build_lattice, build_support_2d, rho_lower_bound
from umedian.weights_exact import aggregate_weights, point_distribution, point_weights_1d
from umedian.weights_mc import McConfig, mc_weights, rounds_needed

from conftest import brute_point_weights, random_instance_1d, random_instance_2d, small_suite_1d

pytestmark = pytest.mark.acceptance

EPSILONS_1D = (0.05, 0.1, 0.3)


@pytest.fixture
def report(capsys):
    def emit(cid, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {cid} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def coverage_suite_1d():
    rng = make_rng(777)
    out = []
    for t in range(50):
        n = int(rng.integers(1, 8))
        k = int(rng.integers(1, 4))
        out.append(random_instance_1d(rng, n, k, ties=bool(t % 3 == 0)))
    return out


def test_1_exact_weights_equal_enumeration(report):
    start = time.perf_counter()
    suite = small_suite_1d()
    bad = 0
    for P in suite:
        w = point_weights_1d(P)
        if w.fractions() != brute_point_weights(P) or w != enumerate_point_weights(P):
            bad += 1
    elapsed = time.perf_counter() - start
    report(1, bad == 0 and elapsed < 10,
           f"{len(suite) - bad}/{len(suite)} instances exactly equal to enumeration in {elapsed:.2f}s (limit 10s)")


def test_2_tied3_reproduction(report):
    ok = True
    details = []
    for delta in (1.0, 3.7):
        P = tied_instance(delta)
        dist = point_distribution(point_weights_1d(P), P)
        masses = dist.value_masses()
        ok &= masses == {0.0: Fraction(1, 2), delta: Fraction(1, 2)}
        ok &= weighted_median_1d(dist) == 0.0
        demo = nonrobustness_demo(delta, Fraction(1, 10 ** 9))
        ok &= demo["m_P"] == 0.0 and demo["m_P_perturbed"] == delta
        ok &= demo["total_variation"] <= Fraction(1, 10 ** 9)
        details.append(f"delta={delta}: masses {masses[0.0]}/{masses[delta]}, flip to {demo['m_P_perturbed']}, "
                       f"TV {demo['total_variation']}")
    report(2, ok, "; ".join(details))


def test_3_coverage_guarantee(report):
    start = time.perf_counter()
    fails_1d, checked_1d = 0, 0
    for P in coverage_suite_1d():
        for eps in EPSILONS_1D:
            rep = coverage_audit(P, build_support_1d(P, eps), phi=1e-12)
            checked_1d += rep.traversals
            fails_1d += len(rep.failures)
    rng = make_rng(4242)
    fails_2d, checked_2d, worst = 0, 0, 0.0
    for t in range(20):
        n = int(rng.integers(2, 5))
        eps = (0.2, 0.5, 1.0)[t % 3]
        P = random_instance_2d(rng, n, 2)
        T = build_support_2d(build_lattice(P, eps, rho_lower_bound(P)), P)
        rep = coverage_audit(P, T, phi=eps / 10)
        checked_2d += rep.traversals
        fails_2d += len(rep.failures)
        worst = max(worst, rep.max_ratio)
    elapsed = time.perf_counter() - start
    report(3, fails_1d == 0 and fails_2d == 0 and elapsed < 60,
           f"1D {checked_1d} medians, {fails_1d} uncovered; 2D {checked_2d} medians, {fails_2d} uncovered "
           f"(max ratio {worst:.3f}); {elapsed:.1f}s (limit 60s)")


def test_4_size_bound_and_lower_bound_rate(report):
    start = time.perf_counter()
    violations, checked = 0, 0
    for P in small_suite_1d() + coverage_suite_1d():
        alpha = alpha_of(P)
        if not math.isfinite(alpha):
            continue
        for eps in EPSILONS_1D:
            checked += 1
            violations += len(build_support_1d(P, eps)) > size_bound_1d(alpha, P.k, eps)
    fam = C0Family1D.uniform(1.0)
    delta = 0.1
    rates = {}
    for k in (2, 3):
        n = math.ceil(4 * required_n_1d(fam.alpha, k, delta))
        rates[k] = experiment_min_costhat_1d(n, k, fam, 200, delta, eps=0.1, seed=k).pass_rate
    elapsed = time.perf_counter() - start
    ok = violations == 0 and all(r >= 0.85 for r in rates.values()) and elapsed < 120
    report(4, ok, f"size bound violated on {violations}/{checked} (instance, eps) pairs; "
                  f"lower-bound pass rates {rates} (need >= 0.85); {elapsed:.1f}s (limit 120s)")


def test_5_mc_accuracy(report):
    start = time.perf_counter()
    P = random_instance_1d(make_rng(55), 7, 3)
    eps = 0.1
    T = build_support_1d(P, eps)
    exact = np.array([float(w) for w in aggregate_weights(point_weights_1d(P), P, T).weights])
    N = rounds_needed(0.1, 0.05, 1, 4)
    good = 0
    for seed in range(100):
        est = mc_weights(P, T, McConfig(eps, delta=0.05, rounds=N, seed=seed))
        good += np.abs(est.float_weights() - exact).max() <= 0.1
    elapsed = time.perf_counter() - start
    report(5, good >= 93 and elapsed < 60, f"{good}/100 runs with max-bin error <= 0.1 at N={N}; {elapsed:.1f}s")


def test_6_median_gap(report):
    total, worst, fails = 0, 0.0, 0
    for P in small_suite_1d():
        for eps in EPSILONS_1D:
            rep = median_gap(P, eps, check=False)
            total += 1
            fails += not rep.holds
            if rep.bound > 0:
                worst = max(worst, rep.gap / rep.bound)
    report(6, fails == 0, f"{total - fails}/{total} cases satisfy the gap bound (max gap/bound {worst:.3f})")


def _grid_min(Q, res=400):
    lo, hi = Q.min(axis=0), Q.max(axis=0)
    X, Y = np.meshgrid(np.linspace(lo[0], hi[0], res), np.linspace(lo[1], hi[1], res))
    G = np.column_stack([X.ravel(), Y.ravel()])
    c = np.zeros(len(G))
    for q in Q:
        c += np.hypot(G[:, 0] - q[0], G[:, 1] - q[1])
    half_diag = 0.5 * math.hypot((hi[0] - lo[0]) / (res - 1), (hi[1] - lo[1]) / (res - 1))
    return float(c.min() / len(Q)), half_diag


def test_7_weiszfeld(report):
    start = time.perf_counter()
    rng = make_rng(99)
    monotone, oracle_ok = True, 0
    for _ in range(50):
        n = int(rng.integers(2, 11))
        Q = rng.uniform(-10, 10, (n, 2))
        r = l1_median(Q, phi=1e-6, record=True)
        monotone &= bool(np.all(np.diff(r.history) <= 0))
        best, cell = _grid_min(Q)
        oracle_ok += r.cost <= best + cell
    tri = np.array([[math.cos(a), math.sin(a)] for a in (0.1, 0.1 + 2 * math.pi / 3, 0.1 + 4 * math.pi / 3)])
    centroid = tri.mean(axis=0)
    sym = float(np.linalg.norm(l1_median(tri, phi=1e-8).point - centroid))
    elapsed = time.perf_counter() - start
    report(7, monotone and oracle_ok == 50 and sym <= 1e-6 and elapsed < 30,
           f"monotone={monotone}, {oracle_ok}/50 within grid bound, triangle offset {sym:.2e}; {elapsed:.1f}s")


def test_8_disk_experiment(report):
    start = time.perf_counter()
    k, R, delta = 2, 1.0, 0.1
    eta = R / (8 * math.pi * (k + 1))
    n = math.floor(required_n_2d(R, eta, delta)) + 1
    rep = experiment_min_costhat_2d(n, k, R, None, 100, delta, eta=eta, seed=8)
    elapsed = time.perf_counter() - start
    report(8, rep.pass_rate >= 0.85 and elapsed < 180,
           f"n={n}: pass rate {rep.pass_rate:.2f} (need >= 0.85), bound {rep.bound:.4f}, "
           f"lowest certified min {min(rep.mins):.4f}; {elapsed:.1f}s")


def test_9_performance(report):
    rng = make_rng(9)
    P = UncertainPointSet(rng.uniform(0, 1000, (100_000, 10, 1)))
    start = time.perf_counter()
    prof = build_profile_1d(P)
    T = build_support_1d(P, 0.1, profile=prof)
    t_support = time.perf_counter() - start
    Q = UncertainPointSet(rng.uniform(0, 1, (500, 10, 1)))
    start = time.perf_counter()
    w = point_weights_1d(Q)
    t_weights = time.perf_counter() - start
    report(9, t_support < 5 and t_weights < 60 and w.total() == 1 and len(T) > 0,
           f"profile+support on nk=1e6: {t_support:.2f}s (limit 5s); exact weights n=500,k=10: "
           f"{t_weights:.2f}s (limit 60s)")
