"""The conservative cost proxy ``costhat(x) = (1/n) sum_i min_j |x - p_ij|``.

``costhat(x) <= cost(x, Q)`` for every traversal ``Q`` and is 1-Lipschitz.
In 1D it is piecewise linear; :func:`build_profile_1d` computes all of its
breakpoints with one sort and a sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidInputError
from .model import UncertainPointSet

__all__ = ["CostProfile1D", "costhat_eval", "costhat_many", "build_profile_1d", "min_costhat", "GridMin"]


def costhat_many(points, P: UncertainPointSet) -> np.ndarray:
    """Vectorised :func:`costhat_eval` over an ``(m, d)`` array of query points."""
    q = np.asarray(points, dtype=np.float64)
    if q.ndim == 1:
        q = q[:, None] if P.dim == 1 else q[None, :]
    if q.shape[1] != P.dim:
        raise InvalidInputError(f"dimension mismatch: query d={q.shape[1]}, instance d={P.dim}")
    return _kernels.costhat_many(q, P.locations)


def costhat_eval(x, P: UncertainPointSet) -> float:
    xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if xv.shape[0] != P.dim:
        raise InvalidInputError(f"dimension mismatch: x has d={xv.shape[0]}, instance d={P.dim}")
    diff = P.locations - xv
    return float(np.sqrt((diff * diff).sum(axis=2)).min(axis=1).mean())


@dataclass(frozen=True, eq=False)
class CostProfile1D:
    """Piecewise-linear representation of costhat on the real line.

    ``slopes[s]`` is ``n`` times the slope on segment ``s``: segment 0 lies
    left of ``breakpoints[0]`` and segment ``m`` right of ``breakpoints[-1]``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    n: int

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        bp = self.breakpoints
        seg = np.searchsorted(bp, x, side="right")
        left = np.clip(seg - 1, 0, len(bp) - 1)
        out = self.values[left] + self.slopes[seg] * (x - bp[left]) / self.n
        return out if out.ndim else float(out)

    def argmin(self) -> float:
        return float(self.breakpoints[int(np.argmin(self.values))])

    def minimum(self) -> float:
        return float(self.values.min())


def build_profile_1d(P: UncertainPointSet) -> CostProfile1D:
    if P.dim != 1:
        raise InvalidInputError("build_profile_1d needs a 1D instance")
    n, k = P.n, P.k
    a = np.sort(P.locations[:, :, 0], axis=1)
    # On each segment costhat(x) = (S x - C) / n with S = sum of +-1 signs and
    # C = sum of sign * nearest location. Events change (S, C) by these deltas.
    mids = 0.5 * (a[:, :-1] + a[:, 1:])
    pos = np.concatenate([a.ravel(), mids.ravel()])
    d_s = np.concatenate([np.full(a.size, 2, dtype=np.int64), np.full(mids.size, -2, dtype=np.int64)])
    d_c = np.concatenate([2.0 * a.ravel(), -(a[:, :-1] + a[:, 1:]).ravel()])
    order = np.argsort(pos, kind="stable")
    pos, d_s, d_c = pos[order], d_s[order], d_c[order]
    bp, first = np.unique(pos, return_index=True)
    s_seg = -n + np.cumsum(np.add.reduceat(d_s, first))
    c_seg = -a[:, 0].sum() + np.cumsum(np.add.reduceat(d_c, first))
    slopes = np.concatenate([[-n], s_seg]).astype(np.int64)
    values = np.maximum((s_seg * bp - c_seg) / n, 0.0)
    for arr in (bp, values, slopes):
        arr.setflags(write=False)
    return CostProfile1D(bp, values, slopes, n)


@dataclass(frozen=True)
class GridMin:
    """Grid-scan minimum of costhat over a 2D box.

    ``value`` is an upper bound on the true minimum; ``lower_bound`` subtracts
    the half cell diagonal, which is certified by the 1-Lipschitz property.
    """

    value: float
    argmin: tuple
    lower_bound: float
    resolution: int


def min_costhat(P: UncertainPointSet, region=None, resolution: int = 256):
    """Minimum of costhat over ``region``.

    1D: ``region`` is ``(lo, hi)`` (default: extent of P_all); the result is
    exact and returned as a float. 2D: ``region`` is ``((x0, y0), (x1, y1))``
    (default: bounding box of P_all) or a callable mask applied to the grid;
    the result is a :class:`GridMin`.
    """
    if P.dim == 1:
        prof = build_profile_1d(P)
        lo, hi = region if region is not None else (prof.breakpoints[0], prof.breakpoints[-1])
        if lo > hi:
            raise InvalidInputError("empty region")
        inside = (prof.breakpoints >= lo) & (prof.breakpoints <= hi)
        return float(min([prof(lo), prof(hi), *prof.values[inside]]))
    if P.dim != 2:
        raise InvalidInputError("min_costhat supports d in {1, 2}")
    flat = P.all_locations()
    mask = None
    if region is None:
        (x0, y0), (x1, y1) = flat.min(axis=0), flat.max(axis=0)
    elif callable(region):
        mask = region
        (x0, y0), (x1, y1) = flat.min(axis=0), flat.max(axis=0)
    else:
        (x0, y0), (x1, y1) = region
    if x0 > x1 or y0 > y1:
        raise InvalidInputError("empty region")
    gx = np.linspace(x0, x1, resolution)
    gy = np.linspace(y0, y1, resolution)
    X, Y = np.meshgrid(gx, gy)
    grid = np.column_stack([X.ravel(), Y.ravel()])
    if mask is not None:
        grid = grid[mask(grid)]
        if grid.shape[0] == 0:
            raise InvalidInputError("empty region")
    vals = _kernels.costhat_many(grid, P.locations)
    best = int(np.argmin(vals))
    hx = (x1 - x0) / max(resolution - 1, 1)
    hy = (y1 - y0) / max(resolution - 1, 1)
    half_diag = 0.5 * float(np.hypot(hx, hy))
    return GridMin(float(vals[best]), tuple(grid[best]), float(vals[best]) - half_diag, resolution)
