"""Exact median-distribution weights on the line.

For a candidate location ``c`` of uncertain point ``i0``, let ``l_i`` be the
number of locations of point ``i`` that precede ``c`` in LexKey order and
``r_i = k - l_i``. The number of traversals whose median is ``c`` is the
coefficient of ``x**((n-1)//2)`` in ``prod_{i != i0} (l_i x + r_i)``: ``x``
marks "below the candidate", and the lower-middle median has ``(n-1)//2``
points below it for both parities of ``n``.

Visiting candidates in LexKey order changes exactly one ``l_i`` per step, so
the full product over all ``n`` points is maintained incrementally: divide out
the candidate's own factor, read the coefficient, multiply the factor back in
with ``l_i + 1``. Coefficients are exact Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import ConsistencyError, InvalidInputError
from .model import LexKey, MedianDistribution, UncertainPointSet
from .support1d import SupportSet

__all__ = [
    "PointWeights",
    "expand_product",
    "remove_factor",
    "multiply_factor",
    "factor_counts",
    "point_weights_1d",
    "point_weights_1d_full",
    "point_weights_1d_float",
    "map_f_T_1d",
    "map_f_T_1d_many",
    "aggregate_weights",
    "point_distribution",
]


@dataclass(frozen=True, eq=False)
class PointWeights:
    """``w(p_ij) = numerators[i][j] / denominator`` with ``denominator = k**n``."""

    numerators: tuple
    denominator: int

    @property
    def n(self) -> int:
        return len(self.numerators)

    @property
    def k(self) -> int:
        return len(self.numerators[0])

    def fraction(self, i: int, j: int) -> Fraction:
        return Fraction(self.numerators[i][j], self.denominator)

    def fractions(self) -> list:
        return [[Fraction(v, self.denominator) for v in row] for row in self.numerators]

    def floats(self) -> np.ndarray:
        return np.array([[v / self.denominator for v in row] for row in self.numerators], dtype=float)

    def total(self) -> Fraction:
        return Fraction(sum(sum(row) for row in self.numerators), self.denominator)

    def __eq__(self, other):
        if not isinstance(other, PointWeights):
            return NotImplemented
        return self.fractions() == other.fractions()

    __hash__ = None


def expand_product(ls, rs) -> list:
    """Coefficients of ``prod_t (ls[t] x + rs[t])`` by the standard DP, lowest degree first."""
    coeffs = [1]
    for l, r in zip(ls, rs):
        nxt = [0] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j] += r * c
            nxt[j + 1] += l * c
        coeffs = nxt
    return coeffs


def remove_factor(coeffs, l, r) -> list:
    """Exact quotient of the polynomial by ``(l x + r)``.

    Raises :class:`ConsistencyError` if the division leaves a remainder.
    """
    if l == 0 and r == 0:
        raise InvalidInputError("cannot divide by the zero polynomial")
    c = list(coeffs)
    if l == 0:
        q = []
        for v in c:
            d, rem = divmod(v, r)
            if rem:
                raise ConsistencyError(f"({l}x+{r}) does not divide {coeffs}")
            q.append(d)
        if q[-1] != 0:
            return q
        return q[:-1] if len(q) > 1 else q
    deg = len(c) - 1
    q = [0] * deg
    if r == 0:
        if c[0] != 0:
            raise ConsistencyError(f"({l}x+{r}) does not divide {coeffs}")
        for j in range(deg):
            q[j], rem = divmod(c[j + 1], l)
            if rem:
                raise ConsistencyError(f"({l}x+{r}) does not divide {coeffs}")
        return q
    prev = 0
    for j in range(deg):
        q[j], rem = divmod(c[j] - l * prev, r)
        if rem:
            raise ConsistencyError(f"({l}x+{r}) does not divide {coeffs}")
        prev = q[j]
    if c[deg] != l * prev:
        raise ConsistencyError(f"({l}x+{r}) does not divide {coeffs}")
    return q


def multiply_factor(coeffs, l, r) -> list:
    out = [0] * (len(coeffs) + 1)
    for j, v in enumerate(coeffs):
        out[j] += r * v
        out[j + 1] += l * v
    return out


def _lex_rank(P: UncertainPointSet) -> np.ndarray:
    """rank[i, j] = position of p_ij in LexKey order."""
    rank = np.empty(P.n * P.k, dtype=np.int64)
    rank[P.lex_order()] = np.arange(P.n * P.k)
    return rank.reshape(P.n, P.k)


def factor_counts(P: UncertainPointSet, candidate) -> tuple[list, list]:
    """``(l, r)`` over the uncertain points other than the candidate's own.

    ``candidate`` is a :class:`LexKey` or an ``(i, j)`` pair. ``l`` counts
    locations strictly below the candidate in LexKey order and ``r = k - l``.
    """
    i0, j0 = (candidate.i, candidate.j) if isinstance(candidate, LexKey) else candidate
    rank = _lex_rank(P)
    below = (rank < rank[i0, j0]).sum(axis=1)
    ls = [int(v) for t, v in enumerate(below) if t != i0]
    return ls, [P.k - v for v in ls]


def _check_1d(P):
    if P.dim != 1:
        raise InvalidInputError(
            "exact weights need a 1D instance; in 2D the median set can have k**n points, "
            "use the Monte-Carlo mode"
        )


def point_weights_1d(P: UncertainPointSet) -> PointWeights:
    """Exact ``w(p_ij)`` for every location, O(n^2 k) big-integer operations."""
    _check_1d(P)
    n, k = P.n, P.k
    nums = [[0] * k for _ in range(n)]
    coeffs = expand_product([0] * n, [k] * n)
    below = [0] * n
    a = (n - 1) // 2
    advance = _kernels.poly_advance
    for flat in P.lex_order():
        i, j = divmod(int(flat), k)
        nums[i][j] = advance(coeffs, below[i], k, a)
        below[i] += 1
    return PointWeights(tuple(tuple(row) for row in nums), k ** n)


def point_weights_1d_full(P: UncertainPointSet) -> PointWeights:
    """Same result as :func:`point_weights_1d`, running the full product DP for
    every candidate independently (O(n^3 k)); used for cross-checking."""
    _check_1d(P)
    n, k = P.n, P.k
    rank = _lex_rank(P)
    a = (n - 1) // 2
    nums = [[0] * k for _ in range(n)]
    for i0 in range(n):
        for j0 in range(k):
            below = (rank < rank[i0, j0]).sum(axis=1)
            ls = [int(v) for t, v in enumerate(below) if t != i0]
            nums[i0][j0] = expand_product(ls, [k - v for v in ls])[a]
    return PointWeights(tuple(tuple(row) for row in nums), k ** n)


def point_weights_1d_float(P: UncertainPointSet, chunk: int = 4096) -> np.ndarray:
    """Approximate weights in double precision (non-default).

    Runs the product DP with probability factors ``(l x + r) / k`` for every
    candidate at once, truncated above degree ``(n-1)//2``. Only nonnegative
    terms are added, so there is no cancellation; the incremental
    divide-and-multiply scheme is avoided here because its rounding errors
    grow geometrically in floating point. Returns an ``(n, k)`` float array.
    """
    _check_1d(P)
    n, k = P.n, P.k
    a = (n - 1) // 2
    rank = _lex_rank(P)
    flat_rank = rank.ravel()
    sorted_rank = np.sort(rank, axis=1)
    out = np.empty(n * k)
    for start in range(0, n * k, chunk):
        cand = np.arange(start, min(start + chunk, n * k))
        own = cand // k
        coeffs = np.zeros((cand.size, a + 1))
        coeffs[:, 0] = 1.0
        for t in range(n):
            pl = np.searchsorted(sorted_rank[t], flat_rank[cand]) / k
            pl[own == t] = 0.0
            pr = 1.0 - pl
            pr[own == t] = 1.0
            shifted = coeffs[:, :-1] * pl[:, None]
            coeffs *= pr[:, None]
            coeffs[:, 1:] += shifted
        out[cand] = coeffs[:, a] / k
    return out.reshape(n, k)


def map_f_T_1d_many(values, T: SupportSet) -> np.ndarray:
    """Indices into ``T`` for each value, per the 1D map onto the greedy support.

    With ``x`` the largest support point ``<= p`` and ``y`` the next one,
    ``p`` goes to ``y`` iff ``y`` covers it and is strictly closer; otherwise
    to ``x``.
    """
    v = np.asarray(values, dtype=np.float64)
    z = T.points[:, 0]
    lo = np.searchsorted(z, v, side="right") - 1
    if np.any(lo < 0):
        raise ConsistencyError("value below the smallest support point; T was built for another instance")
    hi = np.minimum(lo + 1, len(z) - 1)
    dy = np.abs(z[hi] - v)
    take_y = (hi != lo) & (dy <= T.radius[hi]) & (dy < np.abs(v - z[lo]))
    idx = np.where(take_y, hi, lo)
    if np.any(np.abs(z[idx] - v) > T.radius[idx]):
        raise ConsistencyError("a location is not covered by its mapped support point")
    return idx


def map_f_T_1d(p: float, T: SupportSet) -> float:
    return float(T.points[int(map_f_T_1d_many([p], T)[0]), 0])


def aggregate_weights(w: PointWeights, P: UncertainPointSet, T: SupportSet, f=map_f_T_1d_many) -> MedianDistribution:
    """Exact distribution on ``T``: each support point collects the weight of
    every location mapped onto it."""
    idx = f(P.locations[:, :, 0].ravel(), T)
    nums = [0] * len(T)
    for t, v in zip(idx, (v for row in w.numerators for v in row)):
        nums[int(t)] += v
    return MedianDistribution(
        T.points, [Fraction(v, w.denominator) for v in nums], kind="exact",
        meta={"mode": "exact", "construction": T.construction, "epsilon": T.epsilon},
    )


def point_distribution(w: PointWeights, P: UncertainPointSet) -> MedianDistribution:
    """Exact distribution on P_all, one entry per location (duplicates kept)."""
    _check_1d(P)
    return MedianDistribution(
        P.all_locations(), [Fraction(v, w.denominator) for row in w.numerators for v in row], kind="exact",
        meta={"mode": "exact", "construction": "points"},
    )
