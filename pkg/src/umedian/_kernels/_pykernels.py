"""NumPy reference implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
"""

import numpy as np

from ..errors import ConsistencyError

_CHUNK = 1 << 22


def costhat_many(query, locs):
    """Mean over uncertain points of the distance to the nearest location.

    query: (m, d) float64; locs: (n, k, d) float64. Returns (m,) float64.
    """
    query = np.ascontiguousarray(query, dtype=np.float64)
    locs = np.ascontiguousarray(locs, dtype=np.float64)
    m = query.shape[0]
    n, k, d = locs.shape
    out = np.empty(m, dtype=np.float64)
    step = max(1, _CHUNK // (n * k))
    for lo in range(0, m, step):
        q = query[lo:lo + step]
        diff = q[:, None, None, :] - locs[None, :, :, :]
        dist = np.sqrt(np.einsum("mnkd,mnkd->mnk", diff, diff))
        out[lo:lo + step] = dist.min(axis=2).sum(axis=1) / n
    return out


def _subgradient(Q, x, thresh):
    diff = Q - x
    dist = np.sqrt(np.einsum("nd,nd->n", diff, diff))
    coincident = dist <= thresh
    eta = int(coincident.sum())
    nz = ~coincident
    w = 1.0 / dist[nz]
    resid = (diff[nz] * w[:, None]).sum(axis=0)
    return dist, nz, w, eta, resid


def weiszfeld(Q, tol, max_iter, record=False):
    """Weiszfeld iteration with the coincident-point modification.

    Returns ``(x, cost, iterations, converged, certificate, history)`` where
    ``certificate`` is the norm of the minimum-norm subgradient of the mean
    distance at ``x`` and ``history`` lists the cost after every accepted
    step (``None`` unless ``record``).
    """
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    n = Q.shape[0]
    thresh = 1e-12 * (1.0 + float(np.abs(Q).max()))
    x = Q.mean(axis=0)
    dist, nz, w, eta, resid = _subgradient(Q, x, thresh)
    c = float(dist.sum() / n)
    history = [c] if record else None
    rn = float(np.sqrt(resid @ resid))
    cert = max(rn - eta, 0.0) / n
    it = 0
    while cert > tol and it < max_iter:
        if w.size == 0:
            break
        tx = (Q[nz] * w[:, None]).sum(axis=0) / w.sum()
        if eta == 0:
            x_new = tx
        else:
            gamma = min(1.0, eta / rn)
            x_new = (1.0 - gamma) * tx + gamma * x
        ndist, nnz, nw, neta, nresid = _subgradient(Q, x_new, thresh)
        c_new = float(ndist.sum() / n)
        if c_new > c:
            # rounding noise at the optimum; keep the better iterate
            break
        it += 1
        stalled = c - c_new <= 1e-16 * c
        x, dist, nz, w, eta, resid, c = x_new, ndist, nnz, nw, neta, nresid, c_new
        rn = float(np.sqrt(resid @ resid))
        cert = max(rn - eta, 0.0) / n
        if record:
            history.append(c)
        if stalled:
            break
    return x, c, it, cert <= tol, cert, history


def greedy_cover(points, radii):
    """Scan ``points`` in the given order; each not-yet-covered point becomes a
    center and covers every point within its own radius.

    Returns ``(centers, owner)``: indices of centers in selection order and,
    per point, the index of the center that first covered it.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    radii = np.ascontiguousarray(radii, dtype=np.float64)
    m = pts.shape[0]
    owner = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return np.zeros(0, dtype=np.int64), owner
    width = float(radii.max())
    if not width > 0.0:
        width = 1.0
    origin = pts.min(axis=0)
    cells = np.floor((pts - origin) / width).astype(np.int64)
    buckets: dict = {}
    for idx, (cx, cy) in enumerate(map(tuple, cells)):
        buckets.setdefault((cx, cy), []).append(idx)
    buckets = {key: np.array(v, dtype=np.int64) for key, v in buckets.items()}
    centers = []
    for s in range(m):
        if owner[s] >= 0:
            continue
        centers.append(s)
        owner[s] = s
        r = radii[s]
        cx, cy = cells[s]
        for bx in (cx - 1, cx, cx + 1):
            for by in (cy - 1, cy, cy + 1):
                idx = buckets.get((bx, by))
                if idx is None:
                    continue
                diff = pts[idx] - pts[s]
                hit = idx[(np.sqrt(np.einsum("md,md->m", diff, diff)) <= r) & (owner[idx] < 0)]
                owner[hit] = s
    return np.array(centers, dtype=np.int64), owner


def poly_advance(coeffs, l, k, a):
    """One candidate step of the median-count dynamic program.

    ``coeffs`` (list of ints, length n+1) holds the product over all uncertain
    points of ``(l_i x + (k - l_i))``. Divides out the factor with ``l_i = l``,
    reads the coefficient of ``x**a`` of the quotient, then multiplies in the
    factor with ``l_i = l + 1``. Mutates ``coeffs``; returns the coefficient.
    """
    n = len(coeffs) - 1
    r = k - l
    if r != 0:
        prev = 0
        for j in range(n):
            q, rem = divmod(coeffs[j] - l * prev, r)
            if rem:
                raise ConsistencyError(f"factor ({l}x+{r}) does not divide the count polynomial")
            coeffs[j] = q
            prev = q
        if coeffs[n] != l * prev:
            raise ConsistencyError(f"factor ({l}x+{r}) does not divide the count polynomial")
    else:
        if coeffs[0] != 0:
            raise ConsistencyError(f"factor ({l}x) does not divide the count polynomial")
        for j in range(n):
            q, rem = divmod(coeffs[j + 1], l)
            if rem:
                raise ConsistencyError(f"factor ({l}x) does not divide the count polynomial")
            coeffs[j] = q
    coeffs[n] = 0
    out = coeffs[a]
    l2, r2 = l + 1, k - l - 1
    for j in range(n, 0, -1):
        coeffs[j] = r2 * coeffs[j] + l2 * coeffs[j - 1]
    coeffs[0] = r2 * coeffs[0]
    return out

