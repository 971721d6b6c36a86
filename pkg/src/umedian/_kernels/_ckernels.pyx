# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same signatures and results as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, floor

from ..errors import ConsistencyError

cnp.import_array()


def costhat_many(query, locs):
    cdef const double[:, ::1] q = np.ascontiguousarray(query, dtype=np.float64)
    cdef const double[:, :, ::1] p = np.ascontiguousarray(locs, dtype=np.float64)
    cdef Py_ssize_t m = q.shape[0], n = p.shape[0], k = p.shape[1], d = p.shape[2]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t a, i, j, c
    cdef double best, s, t, acc
    with nogil:
        for a in range(m):
            acc = 0.0
            for i in range(n):
                best = -1.0
                for j in range(k):
                    s = 0.0
                    for c in range(d):
                        t = q[a, c] - p[i, j, c]
                        s = s + t * t
                    if best < 0.0 or s < best:
                        best = s
                acc = acc + sqrt(best)
            out[a] = acc / n
    return out_arr


cdef void _subgrad(const double[:, ::1] Q, double[::1] x, double thresh, double[::1] resid,
                   double* cost, double* wsum, Py_ssize_t* eta) noexcept nogil:
    cdef Py_ssize_t n = Q.shape[0], d = Q.shape[1], i, c
    cdef double s, t, dist
    cost[0] = 0.0
    wsum[0] = 0.0
    eta[0] = 0
    for c in range(d):
        resid[c] = 0.0
    for i in range(n):
        s = 0.0
        for c in range(d):
            t = Q[i, c] - x[c]
            s = s + t * t
        dist = sqrt(s)
        cost[0] = cost[0] + dist
        if dist <= thresh:
            eta[0] = eta[0] + 1
        else:
            wsum[0] = wsum[0] + 1.0 / dist
            for c in range(d):
                resid[c] = resid[c] + (Q[i, c] - x[c]) / dist
    cost[0] = cost[0] / n


def weiszfeld(Q, double tol, Py_ssize_t max_iter, record=False):
    cdef const double[:, ::1] q = np.ascontiguousarray(Q, dtype=np.float64)
    cdef Py_ssize_t n = q.shape[0], d = q.shape[1], i, c, it = 0
    cdef double thresh = 1e-12 * (1.0 + float(np.abs(np.asarray(q)).max()))
    x_arr = np.asarray(q).mean(axis=0)
    cdef double[::1] x = x_arr
    cdef double[::1] xn = np.empty(d)
    cdef double[::1] tx = np.empty(d)
    cdef double[::1] resid = np.empty(d)
    cdef double[::1] nresid = np.empty(d)
    cdef double cst, ncst, wsum, nwsum, rn, cert, gamma, s, dist
    cdef Py_ssize_t eta, neta
    cdef bint stalled, do_record = bool(record)
    history = None
    _subgrad(q, x, thresh, resid, &cst, &wsum, &eta)
    if do_record:
        history = [cst]
    rn = 0.0
    for c in range(d):
        rn += resid[c] * resid[c]
    rn = sqrt(rn)
    cert = (rn - eta if rn > eta else 0.0) / n
    while cert > tol and it < max_iter:
        if wsum == 0.0:
            break
        with nogil:
            for c in range(d):
                tx[c] = 0.0
            for i in range(n):
                s = 0.0
                for c in range(d):
                    s = s + (q[i, c] - x[c]) * (q[i, c] - x[c])
                dist = sqrt(s)
                if dist > thresh:
                    for c in range(d):
                        tx[c] = tx[c] + q[i, c] / dist
            if eta == 0:
                for c in range(d):
                    xn[c] = tx[c] / wsum
            else:
                gamma = eta / rn
                if gamma > 1.0:
                    gamma = 1.0
                for c in range(d):
                    xn[c] = (1.0 - gamma) * (tx[c] / wsum) + gamma * x[c]
            _subgrad(q, xn, thresh, nresid, &ncst, &nwsum, &neta)
        if ncst > cst:
            break
        it += 1
        stalled = cst - ncst <= 1e-16 * cst
        for c in range(d):
            x[c] = xn[c]
            resid[c] = nresid[c]
        cst, wsum, eta = ncst, nwsum, neta
        rn = 0.0
        for c in range(d):
            rn += resid[c] * resid[c]
        rn = sqrt(rn)
        cert = (rn - eta if rn > eta else 0.0) / n
        if do_record:
            history.append(cst)
        if stalled:
            break
    return x_arr, cst, it, cert <= tol, cert, history


def greedy_cover(points, radii):
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] rad = np.ascontiguousarray(radii, dtype=np.float64)
    cdef Py_ssize_t m = pts.shape[0]
    owner_arr = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return np.zeros(0, dtype=np.int64), owner_arr
    cdef cnp.int64_t[::1] owner = owner_arr
    cdef double width = float(np.asarray(rad).max())
    if not width > 0.0:
        width = 1.0
    cdef double ox = float(np.asarray(pts[:, 0]).min()), oy = float(np.asarray(pts[:, 1]).min())
    cdef Py_ssize_t nbx = <Py_ssize_t>floor((float(np.asarray(pts[:, 0]).max()) - ox) / width) + 1
    cdef Py_ssize_t nby = <Py_ssize_t>floor((float(np.asarray(pts[:, 1]).max()) - oy) / width) + 1
    cell_arr = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] cell = cell_arr
    cdef Py_ssize_t a, bx, by, cx, cy, b, e, t, s
    for a in range(m):
        cell[a] = (<Py_ssize_t>floor((pts[a, 0] - ox) / width)) * nby + <Py_ssize_t>floor((pts[a, 1] - oy) / width)
    order_arr = np.argsort(cell_arr, kind="stable").astype(np.int64)
    start_arr = np.searchsorted(cell_arr[order_arr], np.arange(nbx * nby + 1)).astype(np.int64)
    cdef cnp.int64_t[::1] order = order_arr
    cdef cnp.int64_t[::1] start = start_arr
    centers = []
    cdef double r, dx, dy
    for s in range(m):
        if owner[s] >= 0:
            continue
        centers.append(s)
        owner[s] = s
        r = rad[s]
        cx = cell[s] // nby
        cy = cell[s] % nby
        with nogil:
            for bx in range(cx - 1, cx + 2):
                if bx < 0 or bx >= nbx:
                    continue
                for by in range(cy - 1, cy + 2):
                    if by < 0 or by >= nby:
                        continue
                    b = bx * nby + by
                    for e in range(start[b], start[b + 1]):
                        t = order[e]
                        if owner[t] >= 0:
                            continue
                        dx = pts[t, 0] - pts[s, 0]
                        dy = pts[t, 1] - pts[s, 1]
                        if sqrt(dx * dx + dy * dy) <= r:
                            owner[t] = s
    return np.array(centers, dtype=np.int64), owner_arr


def poly_advance(list coeffs, l, k, Py_ssize_t a):
    cdef Py_ssize_t n = len(coeffs) - 1, j
    cdef object r = k - l, prev, q, rem, l2, r2
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
    l2 = l + 1
    r2 = k - l - 1
    for j in range(n, 0, -1):
        coeffs[j] = r2 * coeffs[j] + l2 * coeffs[j - 1]
    coeffs[0] = r2 * coeffs[0]
    return out
