"""Core domain types and the exact cost / 1D median primitives.

Locations are stored as float64 arrays of shape ``(n, k, d)``. Indices are
0-based in the Python API (point ``i`` in ``0..n-1``, location ``j`` in
``0..k-1``); the CSV format uses 1-based indices.

The 1D median of an even-sized set is the *lower* middle element, not the
average of the two middles. Coordinate ties are broken by the :class:`LexKey`
order ``(value, i, j)`` so that every traversal has exactly one median point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "LexKey",
    "UncertainPointSet",
    "Traversal",
    "MedianDistribution",
    "cost",
    "median_1d",
    "sample_traversal",
    "make_rng",
]


class LexKey(NamedTuple):
    value: tuple
    i: int
    j: int


def make_rng(seed, *stream) -> np.random.Generator:
    """PCG64 generator keyed by ``seed`` and an optional stream path.

    ``make_rng(s, w)`` for worker ``w`` gives independent, reproducible streams.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, stream)])))


@dataclass(frozen=True, eq=False)
class UncertainPointSet:
    """``n`` uncertain points, each with ``k`` equally likely locations in R^d."""

    locations: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.array(self.locations, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise InvalidInputError("locations must have shape (n, k, d)")
        n, k, d = arr.shape
        if n < 1 or k < 1 or d < 1:
            raise InvalidInputError(f"need n, k, d >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("all coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "locations", arr)

    @classmethod
    def from_nested(cls, points: Sequence, meta=None) -> "UncertainPointSet":
        """Build from ``points[i][j]`` which is a scalar (1D) or a coordinate list."""
        if len(points) == 0:
            raise InvalidInputError("need at least one uncertain point")
        ks = {len(p) for p in points}
        if len(ks) != 1:
            raise InvalidInputError(f"ragged k across uncertain points: {sorted(ks)}")
        try:
            arr = np.array(points, dtype=np.float64)
        except ValueError as exc:
            raise InvalidInputError(f"dimension mismatch among locations: {exc}") from None
        return cls(arr, meta=dict(meta or {}))

    @property
    def n(self) -> int:
        return self.locations.shape[0]

    @property
    def k(self) -> int:
        return self.locations.shape[1]

    @property
    def dim(self) -> int:
        return self.locations.shape[2]

    def all_locations(self) -> np.ndarray:
        """P_all as an ``(n*k, d)`` array, row ``i*k + j`` holding ``p_{i,j}``."""
        return self.locations.reshape(-1, self.dim)

    def lex_order(self) -> np.ndarray:
        """Flat indices of P_all sorted by LexKey (coordinates, i, j)."""
        flat = self.all_locations()
        idx = np.arange(self.n * self.k)
        # np.lexsort uses the last key as primary; flat index already encodes (i, j)
        keys = [idx] + [flat[:, c] for c in range(self.dim - 1, -1, -1)]
        return np.lexsort(keys)

    def key(self, i: int, j: int) -> LexKey:
        return LexKey(tuple(float(c) for c in self.locations[i, j]), i, j)

    def realize(self, traversal: "Traversal") -> np.ndarray:
        return self.locations[np.arange(self.n), np.asarray(traversal.choice)]

    def shifted(self, offset) -> "UncertainPointSet":
        return UncertainPointSet(self.locations + np.asarray(offset, dtype=float), dict(self.meta))

    def __eq__(self, other):
        if not isinstance(other, UncertainPointSet):
            return NotImplemented
        return self.locations.shape == other.locations.shape and bool(
            np.array_equal(self.locations, other.locations)
        )

    __hash__ = None


@dataclass(frozen=True)
class Traversal:
    choice: tuple

    def __post_init__(self):
        object.__setattr__(self, "choice", tuple(int(c) for c in self.choice))


def _as_points(Q) -> np.ndarray:
    arr = np.asarray(Q, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr


def cost(x, Q) -> float:
    """Mean Euclidean distance from ``x`` to the points of ``Q``."""
    pts = _as_points(Q)
    xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if pts.shape[0] == 0:
        raise InvalidInputError("Q is empty")
    if pts.shape[1] != xv.shape[0]:
        raise InvalidInputError(f"dimension mismatch: x has d={xv.shape[0]}, Q has d={pts.shape[1]}")
    return float(np.mean(np.sqrt(np.sum((pts - xv) ** 2, axis=1))))


def median_1d(Q: Sequence[float], tags: Sequence[tuple] | None = None) -> tuple[float, LexKey]:
    """Lower-middle median of ``Q`` under the LexKey order.

    ``tags[m] = (i, j)`` identifies element ``m``; by default element ``m`` is
    tagged ``(m, 0)``. Returns the median value and its key.
    """
    if len(Q) == 0:
        raise InvalidInputError("median of an empty set")
    if tags is None:
        tags = [(m, 0) for m in range(len(Q))]
    keys = sorted(LexKey((float(q),), int(t[0]), int(t[1])) for q, t in zip(Q, tags))
    key = keys[(len(keys) - 1) // 2]
    return key.value[0], key


def sample_traversal(P: UncertainPointSet, seed, *stream) -> Traversal:
    rng = make_rng(seed, *stream)
    return Traversal(rng.integers(0, P.k, size=P.n))


@dataclass(frozen=True, eq=False)
class MedianDistribution:
    """Discrete distribution over support locations.

    ``weights`` holds :class:`fractions.Fraction` values when ``kind`` is
    ``"exact"`` and floats otherwise. ``uncovered_mass`` is the fraction of
    Monte-Carlo rounds whose median no support point covered.
    """

    locs: np.ndarray
    weights: tuple
    kind: str = "floating"
    uncovered_mass: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        locs = _as_points(self.locs) if len(self.locs) else np.zeros((0, 1))
        locs.setflags(write=False)
        object.__setattr__(self, "locs", locs)
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.kind not in ("exact", "floating"):
            raise InvalidInputError(f"unknown weight kind {self.kind!r}")
        if len(self.weights) != locs.shape[0]:
            raise InvalidInputError("one weight per support point required")
        if any(w < 0 for w in self.weights):
            raise InvalidInputError("negative weight")
        if self.kind == "exact":
            if sum(self.weights, Fraction(0)) != 1:
                raise InvalidInputError("exact weights must sum to exactly 1")
        elif self.weights or self.uncovered_mass:
            total = float(np.sum(np.asarray(self.weights, dtype=float))) + self.uncovered_mass
            if abs(total - 1.0) > 1e-9:
                raise InvalidInputError(f"weights sum to {total}, expected 1")

    @property
    def dim(self) -> int:
        return self.locs.shape[1]

    def __len__(self):
        return len(self.weights)

    def float_weights(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights], dtype=float)

    def value_masses(self) -> dict:
        """1D only: map coordinate value to total mass (duplicates merged)."""
        out: dict = {}
        for loc, w in zip(self.locs[:, 0], self.weights):
            out[float(loc)] = out.get(float(loc), 0) + w
        return out
