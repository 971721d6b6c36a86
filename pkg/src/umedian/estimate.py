"""Single-point summary of a 1D median distribution, and why it is fragile.

The weighted median is the smallest support point at which the cumulative
mass reaches 1/2 (inclusive). With exact weights the comparison is exact, so
an even split between two points picks the lower one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .costhat import costhat_eval
from .errors import InvalidInputError, BoundViolation
from .model import MedianDistribution, UncertainPointSet
from .support1d import build_support_1d
from .weights_exact import aggregate_weights, point_distribution, point_weights_1d

__all__ = ["weighted_median_1d", "GapReport", "median_gap", "nonrobustness_demo", "total_variation",
           "tied_instance"]

HALF = Fraction(1, 2)


def weighted_median_1d(dist: MedianDistribution) -> float:
    if len(dist) == 0:
        raise InvalidInputError("weighted median of an empty distribution")
    if dist.dim != 1:
        raise InvalidInputError("weighted median needs a 1D distribution")
    vals = dist.locs[:, 0]
    order = np.argsort(vals, kind="stable")
    if dist.kind == "exact":
        acc = Fraction(0)
        for idx in order:
            acc += dist.weights[idx]
            if acc >= HALF:
                return float(vals[idx])
    else:
        # Neumaier-compensated running sum
        acc, comp = 0.0, 0.0
        for idx in order:
            w = float(dist.weights[idx])
            t = acc + w
            comp += (acc - t) + w if abs(acc) >= abs(w) else (w - t) + acc
            acc = t
            if acc + comp >= 0.5:
                return float(vals[idx])
    return float(vals[order[-1]])


@dataclass(frozen=True)
class GapReport:
    m_T: float
    m_P: float
    gap: float
    bound: float
    support_size: int

    @property
    def holds(self) -> bool:
        return self.gap <= self.bound


def median_gap(P: UncertainPointSet, eps: float, check: bool = True) -> GapReport:
    """Weighted medians over the greedy support and over P_all, their gap, and
    the bound ``eps * costhat(m_P)``."""
    T = build_support_1d(P, eps)
    w = point_weights_1d(P)
    m_T = weighted_median_1d(aggregate_weights(w, P, T))
    m_P = weighted_median_1d(point_distribution(w, P))
    gap = abs(m_T - m_P)
    bound = eps * costhat_eval([m_P], P)
    rep = GapReport(m_T, m_P, gap, bound, len(T))
    # one ulp-scale slack: the cover radius and the bound are separate float products
    if check and gap > bound * (1 + 1e-12) + 1e-300:
        raise BoundViolation(f"|m_T - m_P| = {gap} exceeds eps * costhat(m_P) = {bound}")
    return rep


def tied_instance(delta: float = 1.0) -> UncertainPointSet:
    """n = 3, k = 2: P1 = {0, 0}, P2 = {0, delta}, P3 = {delta, delta}."""
    return UncertainPointSet.from_nested([[0.0, 0.0], [0.0, delta], [delta, delta]],
                                         meta={"family": "tied3", "delta": delta})


def total_variation(a: MedianDistribution, b: MedianDistribution) -> Fraction | float:
    ma, mb = a.value_masses(), b.value_masses()
    keys = set(ma) | set(mb)
    return sum((abs(ma.get(x, 0) - mb.get(x, 0)) for x in keys), 0) / 2


def nonrobustness_demo(delta: float = 1.0, eta=Fraction(1, 10 ** 9)) -> dict:
    """Shift mass ``eta`` from 0 to ``delta`` in the two-point median
    distribution of :func:`tied_instance` and report both summaries."""
    if not delta > 0:
        raise InvalidInputError("delta must be positive")
    eta = Fraction(eta)
    P = tied_instance(delta)
    w = point_weights_1d(P)
    base = point_distribution(w, P)
    masses = base.value_masses()
    pert = MedianDistribution(
        np.array([[0.0], [delta]]), [masses[0.0] - eta, masses[delta] + eta], kind="exact",
    )
    base_v = MedianDistribution(np.array([[0.0], [delta]]), [masses[0.0], masses[delta]], kind="exact")
    return {
        "distribution": {0.0: masses[0.0], delta: masses[delta]},
        "perturbed_distribution": {0.0: masses[0.0] - eta, delta: masses[delta] + eta},
        "m_P": weighted_median_1d(base_v),
        "m_P_perturbed": weighted_median_1d(pert),
        "total_variation": total_variation(base_v, pert),
        "eta": eta,
    }
