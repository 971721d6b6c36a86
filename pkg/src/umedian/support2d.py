"""Support construction in the plane: a certified lower bound on costhat, the
convex hull of P_all, a lattice covering the hull, and a greedy cover of that
lattice.

Chaining: if every hull point is within ``sqrt(2) * beta`` of the lattice
``S`` and ``T`` covers ``S`` at radius ``eps/(2(1+eps)) * costhat(z)``, then
``T`` covers the whole hull at radius ``eps/(1+eps) * costhat(z)`` because
``sqrt(2) * beta = eps/(2(1+eps)) * rho <= eps/(2(1+eps)) * costhat(z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .costhat import costhat_many
from .errors import DegenerateInstanceError, InvalidInputError, ResourceLimitError
from .model import UncertainPointSet
from .support1d import SupportSet, cover_factor

__all__ = [
    "Lattice2D",
    "rho_lower_bound",
    "orientation",
    "convex_hull",
    "in_hull",
    "lattice_points",
    "boundary_samples",
    "lattice_spacing",
    "build_lattice",
    "build_support_2d",
    "DEFAULT_LATTICE_CAP",
]

DEFAULT_LATTICE_CAP = 10_000_000


def rho_lower_bound(P: UncertainPointSet, mode: str = "improved") -> float:
    """Certified lower bound on ``min_x costhat(x)``.

    ``fast``: ``min_j costhat(p_1j) / (n + 1)`` using the first uncertain point
    only. ``improved``: additionally ``min_{i,j} costhat(p_ij) / 2`` over all
    locations (the uncertain point nearest the minimiser is within
    ``costhat(x*)`` of it, so costhat there is at most twice the minimum);
    returns the larger of the two bounds.
    """
    if mode not in ("fast", "improved"):
        raise InvalidInputError(f"unknown rho mode {mode!r}")
    fast = float(costhat_many(P.locations[0], P).min()) / (P.n + 1)
    rho = fast
    if mode == "improved":
        rho = max(fast, 0.5 * float(costhat_many(P.all_locations(), P).min()))
    if not rho > 0.0:
        raise DegenerateInstanceError(
            "costhat lower bound is 0 (coincident locations); no lattice can be built. "
            "Use the sampled-support Monte-Carlo mode instead."
        )
    return rho


def orientation(a, b, c) -> int:
    """Sign of the cross product ``(b - a) x (c - a)``: +1 left turn, -1 right, 0 collinear.

    Float evaluation with a forward error filter; exact rational fallback.
    """
    abx, aby = b[0] - a[0], b[1] - a[1]
    acx, acy = c[0] - a[0], c[1] - a[1]
    det = abx * acy - aby * acx
    bound = 1e-14 * (abs(abx * acy) + abs(aby * acx))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    fa = [Fraction(float(v)) for v in a]
    fb = [Fraction(float(v)) for v in b]
    fc = [Fraction(float(v)) for v in c]
    exact = (fb[0] - fa[0]) * (fc[1] - fa[1]) - (fb[1] - fa[1]) * (fc[0] - fa[0])
    return (exact > 0) - (exact < 0)


def convex_hull(points) -> np.ndarray:
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped.

    A single distinct point gives one vertex; collinear input gives the two
    extreme points.
    """
    pts = np.unique(np.asarray(points, dtype=np.float64).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts
    pts_l = [tuple(p) for p in pts]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts_l)
    upper = chain(reversed(pts_l))
    hull = lower[:-1] + upper[:-1]
    return np.array(hull, dtype=np.float64)


def in_hull(hull: np.ndarray, q, tol: float = 0.0) -> np.ndarray:
    """Vectorised inside-or-on test for a CCW hull. ``tol`` is an absolute distance slack."""
    q = np.atleast_2d(np.asarray(q, dtype=np.float64))
    h = np.asarray(hull, dtype=np.float64)
    if len(h) == 1:
        return np.hypot(*(q - h[0]).T) <= tol
    if len(h) == 2:
        a, b = h
        ab = b - a
        L = float(np.hypot(*ab))
        t = ((q - a) @ ab) / (L * L)
        proj = a + np.clip(t, 0.0, 1.0)[:, None] * ab
        return np.hypot(*(q - proj).T) <= tol
    ok = np.ones(len(q), dtype=bool)
    for a, b in zip(h, np.roll(h, -1, axis=0)):
        e = b - a
        cross = e[0] * (q[:, 1] - a[1]) - e[1] * (q[:, 0] - a[0])
        ok &= cross >= -tol * float(np.hypot(*e))
    return ok


def _row_spans(hull: np.ndarray, ys: np.ndarray):
    """x-interval of the hull on each horizontal line ``y``; NaN where empty."""
    lo = np.full(ys.shape, np.inf)
    hi = np.full(ys.shape, -np.inf)
    h = hull
    edges = [(h[0], h[0])] if len(h) == 1 else list(zip(h, np.roll(h, -1, axis=0)))
    for a, b in edges:
        y0, y1 = min(a[1], b[1]), max(a[1], b[1])
        on = (ys >= y0) & (ys <= y1)
        if not on.any():
            continue
        if b[1] == a[1]:
            xs_lo = np.full(on.sum(), min(a[0], b[0]))
            xs_hi = np.full(on.sum(), max(a[0], b[0]))
        else:
            t = (ys[on] - a[1]) / (b[1] - a[1])
            xs_lo = xs_hi = a[0] + t * (b[0] - a[0])
        lo[on] = np.minimum(lo[on], xs_lo)
        hi[on] = np.maximum(hi[on], xs_hi)
    return lo, hi


def lattice_points(hull: np.ndarray, beta: float, cap: int = DEFAULT_LATTICE_CAP) -> np.ndarray:
    """Points ``(beta i, beta j)`` inside or on the hull, in row-major order (y, then x)."""
    if not beta > 0:
        raise InvalidInputError("lattice spacing must be positive")
    h = np.asarray(hull, dtype=np.float64)
    (x0, y0), (x1, y1) = h.min(axis=0), h.max(axis=0)
    slack = 1e-9
    i0, i1 = math.ceil(x0 / beta - slack), math.floor(x1 / beta + slack)
    j0, j1 = math.ceil(y0 / beta - slack), math.floor(y1 / beta + slack)
    cells = max(i1 - i0 + 1, 0) * max(j1 - j0 + 1, 0)
    if cells > cap:
        raise ResourceLimitError(
            f"lattice needs ~{cells} cells, above the cap {cap}; need spacing >= "
            f"{math.sqrt((x1 - x0 + beta) * (y1 - y0 + beta) / cap):.6g} (raise epsilon or the cap)"
        )
    if cells == 0:
        return np.zeros((0, 2))
    js = np.arange(j0, j1 + 1)
    lo, hi = _row_spans(h, js * beta)
    rows = []
    for j, a, b in zip(js, lo, hi):
        if not a <= b + slack * beta:
            continue
        ia, ib = math.ceil(a / beta - slack), math.floor(b / beta + slack)
        if ia > ib:
            continue
        xs = np.arange(ia, ib + 1) * beta
        rows.append(np.column_stack([xs, np.full(xs.shape, j * beta)]))
    return np.concatenate(rows) if rows else np.zeros((0, 2))


def boundary_samples(hull: np.ndarray, beta: float) -> np.ndarray:
    """Hull vertices plus points along each edge at spacing at most ``beta``."""
    h = np.asarray(hull, dtype=np.float64)
    if len(h) == 1:
        return h.copy()
    out = [h]
    edges = [(h[0], h[1])] if len(h) == 2 else zip(h, np.roll(h, -1, axis=0))
    for a, b in edges:
        m = math.ceil(float(np.hypot(*(b - a))) / beta)
        if m > 1:
            t = np.arange(1, m) / m
            out.append(a + t[:, None] * (b - a))
    return np.concatenate(out)


@dataclass(frozen=True, eq=False)
class Lattice2D:
    """Covering set ``S`` for the hull of P_all.

    ``points`` are sorted row-major (increasing y, then x). The first
    ``n_grid`` entries before sorting were true lattice points; ``is_grid``
    marks them after sorting. Boundary samples are added so that every hull
    point lies within ``sqrt(2) * beta`` of ``S`` even for very thin hulls.
    """

    beta: float
    points: np.ndarray
    hull: np.ndarray
    is_grid: np.ndarray
    rho: float
    epsilon: float

    def __len__(self):
        return self.points.shape[0]


def lattice_spacing(eps: float, rho: float) -> float:
    return eps / (2.0 * math.sqrt(2.0) * (1.0 + eps)) * rho


def build_lattice(P: UncertainPointSet, eps: float, rho: float, cap: int = DEFAULT_LATTICE_CAP) -> Lattice2D:
    if P.dim != 2:
        raise InvalidInputError("build_lattice needs a 2D instance")
    if not 0 < eps <= 1:
        raise InvalidInputError(f"epsilon must lie in (0, 1] in 2D, got {eps}")
    if not rho > 0:
        raise DegenerateInstanceError("rho must be positive to build a lattice")
    beta = lattice_spacing(eps, rho)
    hull = convex_hull(P.all_locations())
    try:
        grid = lattice_points(hull, beta, cap)
    except ResourceLimitError as exc:
        raise ResourceLimitError(f"{exc}; equivalently rho >= or epsilon larger than current ({eps})") from None
    snap = boundary_samples(hull, beta)
    pts = np.concatenate([grid, snap])
    flag = np.concatenate([np.ones(len(grid), bool), np.zeros(len(snap), bool)])
    pts, first = np.unique(pts, axis=0, return_index=True)
    flag = flag[first]
    order = np.lexsort((pts[:, 0], pts[:, 1]))
    pts, flag = pts[order], flag[order]
    for arr in (pts, flag, hull):
        arr.setflags(write=False)
    return Lattice2D(beta, pts, hull, flag, float(rho), float(eps))


def build_support_2d(S: Lattice2D, P: UncertainPointSet, eps: float | None = None) -> SupportSet:
    """Greedy cover of ``S`` in its stored (row-major) order."""
    eps = S.epsilon if eps is None else eps
    ch = costhat_many(S.points, P)
    half = 0.5 * cover_factor(eps) * ch
    centers, owner = _kernels.greedy_cover(S.points, half)
    return SupportSet(
        S.points[centers],
        ch[centers],
        float(eps),
        "lattice2d",
        build_radius=half[centers],
        rho=S.rho,
        stats={"lattice_size": int(len(S)), "grid_points": int(S.is_grid.sum()), "beta": S.beta},
    )
