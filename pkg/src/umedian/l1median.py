"""Geometric (L1) median of a concrete point set.

In 1D the median is exact (lower middle). In higher dimensions a modified
Weiszfeld iteration is run until the minimum-norm subgradient of the mean
distance drops below ``phi * tol_factor``. When an iterate lands on a data
point, that point's term is removed and the point is accepted as the median
if the remaining unit vectors sum to at most its multiplicity; otherwise the
step is damped off the point (Vardi-Zhang).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidInputError
from .model import cost, median_1d

__all__ = ["WeiszfeldResult", "l1_median", "optimality_certificate"]


@dataclass(frozen=True)
class WeiszfeldResult:
    point: np.ndarray
    cost: float
    iterations: int
    converged: bool
    phi_achieved: float
    history: tuple | None = None


def l1_median(Q, phi: float = 1e-6, max_iter: int = 10_000, tol_factor: float = 1e-2, record: bool = False):
    """phi-approximate L1 median of the rows of ``Q``.

    ``phi_achieved`` is the subgradient residual at the returned point, a
    conservative certificate: zero means exact optimality.
    """
    pts = np.asarray(Q, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] == 0:
        raise InvalidInputError("L1 median of an empty set")
    if not phi > 0:
        raise InvalidInputError("phi must be positive")
    if pts.shape[1] == 1:
        value, _ = median_1d(pts[:, 0])
        c = cost([value], pts)
        return WeiszfeldResult(np.array([value]), c, 0, True, 0.0, (c,) if record else None)
    x, c, it, ok, cert, hist = _kernels.weiszfeld(pts, phi * tol_factor, int(max_iter), record)
    x = np.asarray(x)
    # slow convergence onto a data-point median: never return worse than the best data point
    data_costs = _kernels.costhat_many(pts, pts[:, None, :])
    best = int(np.argmin(data_costs))
    if data_costs[best] <= c:
        x, c = pts[best].copy(), float(data_costs[best])
        cert = optimality_certificate(x, pts)
        ok = ok or cert <= phi * tol_factor
        if hist is not None:
            hist = list(hist) + [c]
    return WeiszfeldResult(x, float(c), int(it), bool(ok), float(cert),
                           tuple(hist) if hist is not None else None)


def optimality_certificate(x, Q) -> float:
    """Norm of the minimum-norm subgradient of ``cost(., Q)`` at ``x``."""
    pts = np.asarray(Q, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
    diff = pts - xv
    dist = np.sqrt((diff * diff).sum(axis=1))
    thresh = 1e-12 * (1.0 + float(np.abs(pts).max()))
    on = dist <= thresh
    resid = (diff[~on] / dist[~on, None]).sum(axis=0)
    return max(float(np.linalg.norm(resid)) - int(on.sum()), 0.0) / len(pts)
