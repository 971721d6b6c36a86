"""Greedy approximate support of the median distribution on the line."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .costhat import build_profile_1d, min_costhat
from .errors import InvalidInputError
from .model import UncertainPointSet

__all__ = ["SupportSet", "cover_factor", "build_support_1d", "alpha_of", "size_bound_1d"]


def cover_factor(eps: float) -> float:
    """``eps / (1 + eps)``: a point ``z`` covers ``q`` when ``|z - q| <= cover_factor(eps) * costhat(z)``."""
    return eps / (1.0 + eps)


@dataclass(frozen=True, eq=False)
class SupportSet:
    """Approximate support ``T``.

    ``radius[i] = eps/(1+eps) * costhat[i]`` is the covering radius used when
    mapping medians onto ``T``. The 2D lattice construction also records the
    half radius it used while covering the lattice in ``build_radius``.
    """

    points: np.ndarray
    costhat: np.ndarray
    epsilon: float
    construction: str
    radius: np.ndarray = None
    build_radius: np.ndarray | None = None
    rho: float | None = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        ch = np.asarray(self.costhat, dtype=np.float64)
        rad = cover_factor(self.epsilon) * ch if self.radius is None else np.asarray(self.radius, dtype=np.float64)
        for arr in (pts, ch, rad):
            arr.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "costhat", ch)
        object.__setattr__(self, "radius", rad)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def build_support_1d(P: UncertainPointSet, eps: float, profile=None) -> SupportSet:
    """Greedy scan over sorted P_all.

    Starting from the smallest location ``x``, repeatedly add the smallest
    location strictly greater than ``x + eps/(1+eps) * costhat(x)``.
    """
    if not eps > 0:
        raise InvalidInputError(f"epsilon must be > 0, got {eps}")
    if P.dim != 1:
        raise InvalidInputError("build_support_1d needs a 1D instance")
    prof = profile if profile is not None else build_profile_1d(P)
    values = np.unique(P.locations.ravel())
    ch = np.asarray(prof(values))
    f = cover_factor(eps)
    picks = [0]
    idx = 0
    while True:
        reach = values[idx] + f * ch[idx]
        idx = int(np.searchsorted(values, reach, side="right"))
        if idx >= values.size:
            break
        picks.append(idx)
    picks = np.array(picks)
    return SupportSet(values[picks], ch[picks], float(eps), "greedy1d", stats={"candidates": int(values.size)})


def alpha_of(P: UncertainPointSet) -> float:
    """Smallest ``alpha`` with ``min costhat >= L / (alpha k)`` over the extent ``L`` of P_all.

    Returns ``math.inf`` when the minimum of costhat is zero.
    """
    if P.dim != 1:
        raise InvalidInputError("alpha_of needs a 1D instance")
    flat = P.locations.ravel()
    extent = float(flat.max() - flat.min())
    low = min_costhat(P)
    if low <= 0.0:
        return math.inf
    return extent / (P.k * low)


def size_bound_1d(alpha: float, k: int, eps: float) -> float:
    """Upper bound ``alpha * k * (1 + eps) / eps`` on the greedy support size."""
    return alpha * k * (1.0 + eps) / eps
