"""Monte-Carlo median-distribution weights in any dimension.

Each round draws a uniform traversal, computes its median (exact in 1D,
phi-approximate otherwise) and credits the support point it maps to. With
``N = ceil(C / eps^2 * (d + ln(1/delta)))`` rounds every bin is within
``eps`` of its true mass with probability at least ``1 - delta``; ``C`` is the
unspecified uniform-convergence constant, exposed as ``vc_constant``.

Rounds are grouped into fixed blocks seeded by ``(seed, block)``, so results
do not depend on how blocks are spread over worker threads.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import AuditFailure, ConsistencyError, InvalidInputError
from .l1median import l1_median
from .model import MedianDistribution, UncertainPointSet, make_rng
from .support1d import SupportSet
from .weights_exact import _lex_rank, map_f_T_1d_many

__all__ = [
    "McConfig",
    "rounds_needed",
    "map_f_T_general",
    "map_support",
    "round_medians",
    "mc_weights",
    "sampled_support",
    "worker_count",
    "BLOCK",
]

BLOCK = 1024
MERGE_TOL = 1e-9


def worker_count() -> int:
    env = os.environ.get("UMEDIAN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def rounds_needed(eps: float, delta: float, d: int, C: float = 4.0) -> int:
    if not eps > 0:
        raise InvalidInputError("epsilon must be positive")
    if not 0 < delta < 1:
        raise InvalidInputError("delta must lie in (0, 1)")
    if d < 1 or not C > 0:
        raise InvalidInputError("need d >= 1 and C > 0")
    raw = C / eps ** 2 * (d + math.log(1.0 / delta))
    # absorb float noise so that exact integers are not bumped up by ceil
    return max(1, math.ceil(raw - 1e-9 * max(1.0, raw)))


@dataclass(frozen=True)
class McConfig:
    epsilon: float
    delta: float = 0.05
    rounds: int | None = None
    vc_constant: float = 4.0
    phi: float | None = None
    seed: int = 0
    miss_threshold: float = 0.05
    strict: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidInputError("epsilon must be positive")
        if not 0 < self.delta < 1:
            raise InvalidInputError("delta must lie in (0, 1)")
        if self.rounds is not None and self.rounds < 1:
            raise InvalidInputError("rounds must be >= 1")
        if self.phi is not None and not 0 <= self.phi < self.epsilon:
            raise InvalidInputError("phi must satisfy 0 <= phi < epsilon")

    def resolved_phi(self, d: int) -> float:
        if d == 1:
            return 0.0
        return self.epsilon / 10 if self.phi is None else self.phi

    def resolved_rounds(self, d: int) -> int:
        return self.rounds or rounds_needed(self.epsilon, self.delta, d, self.vc_constant)


def map_f_T_general(q, T: SupportSet, eps: float, phi: float = 0.0) -> int:
    """Index of the nearest support point whose shrunken radius covers ``q``.

    The radius factor is ``(eps - phi) / (1 + eps - phi)`` to absorb the
    median's accuracy. Distance ties go to the lexicographically smallest
    coordinates. Returns -1 when nothing covers ``q``.
    """
    qv = np.atleast_1d(np.asarray(q, dtype=np.float64))
    e = eps - phi
    f = e / (1.0 + e)
    dist = np.sqrt(((T.points - qv) ** 2).sum(axis=1))
    ok = np.flatnonzero(dist <= f * T.costhat)
    if ok.size == 0:
        return -1
    best = dist[ok].min()
    tied = ok[dist[ok] == best]
    if tied.size > 1:
        pts = T.points[tied]
        tied = tied[np.lexsort(pts.T[::-1])]
    return int(tied[0])


def map_support(q, T: SupportSet, eps: float, phi: float = 0.0) -> int:
    """Map used throughout for binning medians onto ``T``.

    Greedy 1D supports with exact medians use the 1D successor/predecessor
    rule, which is what exact aggregation uses; everything else uses
    :func:`map_f_T_general`.
    """
    if T.construction == "greedy1d" and phi == 0 and eps == T.epsilon:
        try:
            return int(map_f_T_1d_many(np.atleast_1d(q)[:1], T)[0])
        except ConsistencyError:
            return map_f_T_general(q, T, eps, phi)
    return map_f_T_general(q, T, eps, phi)


def _block_medians(P: UncertainPointSet, seed: int, block: int, count: int, phi: float, rank, a):
    rng = make_rng(seed, block)
    choices = rng.integers(0, P.k, size=(count, P.n))
    rows = np.arange(P.n)
    if P.dim == 1:
        r = rank[rows, choices]
        med = np.partition(r, a, axis=1)[:, a]
        return med
    out = np.empty((count, P.dim))
    for t in range(count):
        out[t] = l1_median(P.locations[rows, choices[t]], phi=phi).point
    return out


def round_medians(P: UncertainPointSet, rounds: int, seed: int, phi: float = 0.0) -> np.ndarray:
    """Medians of ``rounds`` random traversals.

    1D: returns flat P_all indices of the medians. Otherwise an ``(N, d)`` array.
    """
    rank = _lex_rank(P) if P.dim == 1 else None
    a = (P.n - 1) // 2
    blocks = [(b, min(BLOCK, rounds - b * BLOCK)) for b in range(math.ceil(rounds / BLOCK))]
    workers = min(worker_count(), len(blocks))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda bc: _block_medians(P, seed, bc[0], bc[1], phi, rank, a), blocks))
    else:
        parts = [_block_medians(P, seed, b, c, phi, rank, a) for b, c in blocks]
    out = np.concatenate(parts)
    if P.dim == 1:
        order = P.lex_order()
        return order[out]
    return out


def _config_meta(cfg: McConfig, N: int, phi: float, mode: str) -> dict:
    meta = asdict(cfg)
    meta.update(mode=mode, rounds=N, phi=phi)
    return meta


def mc_weights(P: UncertainPointSet, T: SupportSet | None, cfg: McConfig) -> MedianDistribution:
    """Estimated bin masses on ``T``; an empty or missing ``T`` falls back to
    :func:`sampled_support`."""
    if T is None or len(T) == 0:
        return sampled_support(P, cfg)
    if T.dim != P.dim:
        raise InvalidInputError("support and instance dimensions differ")
    N = cfg.resolved_rounds(P.dim)
    phi = cfg.resolved_phi(P.dim)
    meds = round_medians(P, N, cfg.seed, phi)
    counts = np.zeros(len(T), dtype=np.int64)
    misses = 0
    if P.dim == 1:
        flat = P.all_locations()[:, 0]
        uniq, inv = np.unique(flat[meds], return_inverse=True)
        mapped = np.array([map_support(u, T, cfg.epsilon, phi) for u in uniq], dtype=np.int64)
        per = mapped[inv]
        misses = int((per < 0).sum())
        np.add.at(counts, per[per >= 0], 1)
    else:
        for m in meds:
            idx = map_support(m, T, cfg.epsilon, phi)
            if idx < 0:
                misses += 1
            else:
                counts[idx] += 1
    uncovered = misses / N
    if uncovered > cfg.miss_threshold:
        msg = f"{uncovered:.3%} of sampled medians are not covered by T (epsilon or phi mismatch?)"
        if cfg.strict:
            raise AuditFailure(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return MedianDistribution(T.points, counts / N, kind="floating", uncovered_mass=uncovered,
                              meta=_config_meta(cfg, N, phi, "mc"))


def _merge_close(points: np.ndarray, tol: float):
    order = np.lexsort(points.T[::-1])
    reps: list = []
    label = np.empty(len(points), dtype=np.int64)
    for idx in order:
        p = points[idx]
        if reps and float(np.sqrt(((reps[-1] - p) ** 2).sum())) <= tol:
            label[idx] = len(reps) - 1
        else:
            reps.append(p)
            label[idx] = len(reps) - 1
    return np.array(reps), label


def sampled_support(P: UncertainPointSet, cfg: McConfig) -> MedianDistribution:
    """Use the sampled medians themselves as the support.

    Medians within 1e-9 of each other are merged. Bins whose true mass is at
    most ``epsilon`` may be missing entirely.
    """
    N = cfg.resolved_rounds(P.dim)
    phi = cfg.resolved_phi(P.dim)
    meds = round_medians(P, N, cfg.seed, phi)
    if P.dim == 1:
        meds = P.all_locations()[meds]
    reps, label = _merge_close(np.asarray(meds, dtype=np.float64), MERGE_TOL)
    counts = np.bincount(label, minlength=len(reps))
    return MedianDistribution(reps, counts / N, kind="floating", meta=_config_meta(cfg, N, phi, "sampled"))
