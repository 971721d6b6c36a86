"""Brute-force ground truth over all ``k**n`` traversals.

Traversals are produced by a mixed-radix counter (``itertools.product``) and
streamed, never materialised. The cap is checked in log space before any
enumeration starts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .l1median import l1_median
from .model import MedianDistribution, UncertainPointSet, cost
from .support1d import SupportSet
from .weights_exact import PointWeights, _lex_rank
from .weights_mc import map_support

__all__ = [
    "DEFAULT_CAP",
    "check_cap",
    "traversals",
    "traversal_medians",
    "enumerate_point_weights",
    "enumerate_binned",
    "coverage_audit",
    "AuditReport",
]

DEFAULT_CAP = 20_000


def check_cap(P: UncertainPointSet, cap: int = DEFAULT_CAP) -> int:
    if P.n * math.log(P.k) > math.log(cap) + 1e-12:
        raise ResourceLimitError(f"k**n = {P.k}**{P.n} traversals exceeds the enumeration cap {cap}")
    return P.k ** P.n


def traversals(P: UncertainPointSet):
    return itertools.product(range(P.k), repeat=P.n)


def traversal_medians(P: UncertainPointSet, phi: float = 1e-9, cap: int = DEFAULT_CAP):
    """Yield ``(choice, median, Q)`` for every traversal.

    1D medians are exact LexKey lower medians; in higher dimensions the
    phi-approximate L1 median.
    """
    check_cap(P, cap)
    rows = np.arange(P.n)
    if P.dim == 1:
        rank = _lex_rank(P)
        a = (P.n - 1) // 2
        for choice in traversals(P):
            c = np.asarray(choice)
            r = rank[rows, c]
            i = int(np.argsort(r)[a])
            yield choice, P.locations[i, c[i]], P.locations[rows, c]
    else:
        for choice in traversals(P):
            Q = P.locations[rows, np.asarray(choice)]
            yield choice, l1_median(Q, phi=phi).point, Q


def enumerate_point_weights(P: UncertainPointSet, cap: int = DEFAULT_CAP) -> PointWeights:
    if P.dim != 1:
        raise InvalidInputError("point weights are defined for 1D instances")
    check_cap(P, cap)
    rank = _lex_rank(P)
    a = (P.n - 1) // 2
    rows = np.arange(P.n)
    counts = [[0] * P.k for _ in range(P.n)]
    for choice in traversals(P):
        c = np.asarray(choice)
        i = int(np.argsort(rank[rows, c])[a])
        counts[i][choice[i]] += 1
    return PointWeights(tuple(tuple(r) for r in counts), P.k ** P.n)


def enumerate_binned(P: UncertainPointSet, T: SupportSet, eps: float | None = None, phi: float = 0.0,
                     cap: int = DEFAULT_CAP) -> MedianDistribution:
    """Exact bin masses on ``T`` using the same map as the Monte-Carlo estimator.

    Medians that no support point covers are reported as ``uncovered_mass``
    (and in ``meta['misses']``); with a valid ``T`` there are none.
    """
    eps = T.epsilon if eps is None else eps
    total = check_cap(P, cap)
    nums = [0] * len(T)
    misses = []
    for choice, m, _ in traversal_medians(P, phi=phi if phi > 0 else 1e-9, cap=cap):
        idx = map_support(np.atleast_1d(m), T, eps, phi)
        if idx < 0:
            misses.append(choice)
        else:
            nums[idx] += 1
    if misses:
        weights = [v / total for v in nums]
        return MedianDistribution(T.points, weights, kind="floating", uncovered_mass=len(misses) / total,
                                  meta={"mode": "oracle", "misses": misses})
    return MedianDistribution(T.points, [Fraction(v, total) for v in nums], kind="exact",
                              meta={"mode": "oracle", "misses": []})


@dataclass
class AuditReport:
    passed: bool
    traversals: int
    max_ratio: float
    failures: list = field(default_factory=list)

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return f"{state}: {self.traversals} traversals, max distance/(eps*cost) = {self.max_ratio:.4f}, failures = {len(self.failures)}"


def coverage_audit(P: UncertainPointSet, T: SupportSet, eps: float | None = None, phi: float = 1e-9,
                   cap: int = DEFAULT_CAP) -> AuditReport:
    """Check that every traversal median ``m`` has some ``z`` in ``T`` with
    ``|z - m| <= eps * cost(m, Q)``."""
    eps = T.epsilon if eps is None else eps
    Z = T.points
    worst = 0.0
    failures = []
    count = 0
    for choice, m, Q in traversal_medians(P, phi=phi, cap=cap):
        count += 1
        d = float(np.sqrt(((Z - m) ** 2).sum(axis=1)).min())
        budget = eps * cost(m, Q)
        if d == 0.0:
            continue
        ratio = d / budget if budget > 0 else math.inf
        worst = max(worst, ratio)
        if d > budget:
            failures.append({"traversal": choice, "median": np.atleast_1d(m).tolist(), "distance": d,
                             "budget": budget})
    return AuditReport(not failures, count, worst, failures)
