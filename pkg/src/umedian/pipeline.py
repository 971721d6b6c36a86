"""Dimension-dispatching entry points used by the CLI."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import InvalidInputError
from .model import MedianDistribution, UncertainPointSet
from .support1d import SupportSet, build_support_1d
from .support2d import DEFAULT_LATTICE_CAP, build_lattice, build_support_2d, rho_lower_bound
from .weights_exact import aggregate_weights, point_weights_1d

__all__ = ["build_support", "exact_distribution", "merge_equal_locations"]


def build_support(P: UncertainPointSet, eps: float, rho_mode: str = "improved",
                  lattice_cap: int = DEFAULT_LATTICE_CAP) -> SupportSet:
    if P.dim == 1:
        return build_support_1d(P, eps)
    if P.dim == 2:
        rho = rho_lower_bound(P, rho_mode)
        return build_support_2d(build_lattice(P, eps, rho, lattice_cap), P)
    raise InvalidInputError(f"supports are implemented for d in {{1, 2}}, got d={P.dim}")


def merge_equal_locations(dist: MedianDistribution) -> MedianDistribution:
    """Collapse entries with identical coordinates; output is sorted lexicographically."""
    uniq, inv = np.unique(dist.locs, axis=0, return_inverse=True)
    zero = Fraction(0) if dist.kind == "exact" else 0.0
    acc = [zero] * len(uniq)
    for t, w in zip(inv.ravel(), dist.weights):
        acc[int(t)] += w
    return MedianDistribution(uniq, acc, kind=dist.kind, uncovered_mass=dist.uncovered_mass, meta=dict(dist.meta))


def exact_distribution(P: UncertainPointSet, T: SupportSet | None = None) -> MedianDistribution:
    """Exact 1D distribution on ``T``, or on the distinct values of P_all when ``T`` is None."""
    if P.dim != 1:
        raise InvalidInputError(
            "exact weights need dim 1: in higher dimensions exact enumeration takes at least k**n time; "
            "use --mode mc"
        )
    w = point_weights_1d(P)
    if T is not None:
        return aggregate_weights(w, P, T)
    flat = [v for row in w.numerators for v in row]
    d = MedianDistribution(P.all_locations(), [Fraction(v, w.denominator) for v in flat], kind="exact",
                           meta={"mode": "exact", "construction": "points"})
    return merge_equal_locations(d)
