"""Synthetic instances with bounded densities, and the lower-bound experiments.

A 1D family is ``C0``-bounded on ``[0, L]``: its density never exceeds
``C0``. The capped family uses a piecewise-constant density, so its cdf is
piecewise linear and sampling is a closed-form inverse per segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .costhat import min_costhat
from .errors import InvalidInputError, BoundViolation
from .model import UncertainPointSet, make_rng
from .support1d import build_support_1d
from .support2d import build_lattice, build_support_2d, rho_lower_bound

__all__ = [
    "C0Family1D",
    "DiskFamily2D",
    "gen_instance_1d",
    "gen_instance_2d",
    "required_n_1d",
    "required_n_2d",
    "experiment_min_costhat_1d",
    "experiment_min_costhat_2d",
    "ExperimentReport",
    "mean_nearest_spot_check",
    "binomial_slack",
]


@dataclass(frozen=True, eq=False)
class C0Family1D:
    """Distribution on ``[0, L]`` with density at most ``C0``.

    ``heights[s]`` is the density on the ``s``-th of ``len(heights)`` equal
    segments. Build with :meth:`uniform` or :meth:`capped`.
    """

    kind: str
    L: float
    C0: float
    heights: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=np.float64)
        if not (self.L > 0 and self.C0 > 0):
            raise InvalidInputError("L and C0 must be positive")
        if self.L * self.C0 < 1 - 1e-12:
            raise InvalidInputError(f"L * C0 = {self.L * self.C0} < 1: no density on [0, L] is that small")
        if h.ndim != 1 or h.size == 0 or np.any(h < 0) or h.max() > self.C0 * (1 + 1e-12):
            raise InvalidInputError("segment densities must lie in [0, C0]")
        mass = h.sum() * self.L / h.size
        if abs(mass - 1.0) > 1e-9:
            raise InvalidInputError(f"density integrates to {mass}, expected 1")
        h.setflags(write=False)
        object.__setattr__(self, "heights", h)

    @classmethod
    def uniform(cls, L: float = 1.0) -> "C0Family1D":
        return cls("uniform", float(L), 1.0 / L, np.array([1.0 / L]))

    @classmethod
    def capped(cls, L: float, C0: float, segments: int = 16, seed: int = 0) -> "C0Family1D":
        """Random step density on ``segments`` equal pieces, max height ``<= C0``.

        Random heights are blended with the uniform density just enough to
        respect the cap.
        """
        if segments < 1:
            raise InvalidInputError("segments must be >= 1")
        if not (L > 0 and C0 * L >= 1):
            raise InvalidInputError("need L > 0 and L * C0 >= 1")
        raw = make_rng(seed, 7).uniform(0.0, 1.0, segments)
        h = raw / (raw.sum() * L / segments)
        base = 1.0 / L
        if h.max() > C0:
            t = (C0 - base) / (h.max() - base)
            h = t * h + (1 - t) * base
        return cls("capped", float(L), float(C0), h)

    @property
    def alpha(self) -> float:
        return self.L * self.C0

    def _edges(self):
        w = self.L / self.heights.size
        cum = np.concatenate([[0.0], np.cumsum(self.heights * w)])
        cum /= cum[-1]
        return w, cum

    def cdf(self, x):
        w, cum = self._edges()
        xv = np.clip(np.asarray(x, dtype=np.float64), 0.0, self.L)
        s = np.minimum((xv // w).astype(np.int64), self.heights.size - 1)
        return cum[s] + self.heights[s] * (xv - s * w)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        w, cum = self._edges()
        u = rng.uniform(0.0, 1.0, size)
        s = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, self.heights.size - 1)
        x = s * w + (u - cum[s]) / self.heights[s]
        return np.clip(x, 0.0, self.L)


@dataclass(frozen=True)
class DiskFamily2D:
    """Uniform density on the disk of radius ``r = 1 / sqrt(pi * C0)`` centred
    at the origin, which must fit inside ``B(0, R)``."""

    R: float
    C0: float | None = None

    def __post_init__(self):
        if not self.R > 0:
            raise InvalidInputError("R must be positive")
        c0 = 1.0 / (math.pi * self.R ** 2) if self.C0 is None else float(self.C0)
        if c0 * math.pi * self.R ** 2 < 1 - 1e-12:
            raise InvalidInputError("C0 below 1/(pi R^2): no density on the disk is that small")
        object.__setattr__(self, "C0", c0)

    @property
    def radius(self) -> float:
        return 1.0 / math.sqrt(math.pi * self.C0)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        shape = (size,) if np.isscalar(size) else tuple(size)
        r = self.radius * np.sqrt(rng.uniform(0.0, 1.0, shape))
        t = rng.uniform(0.0, 2 * math.pi, shape)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)


def _check_nk(n, k):
    if int(n) != n or int(k) != k or n < 1 or k < 1:
        raise InvalidInputError(f"n and k must be positive integers, got n={n}, k={k}")


def gen_instance_1d(n: int, k: int, family, seed: int = 0) -> UncertainPointSet:
    """``family`` is one :class:`C0Family1D` or a list of ``n`` of them."""
    _check_nk(n, k)
    fams = list(family) if isinstance(family, (list, tuple)) else [family] * n
    if len(fams) != n:
        raise InvalidInputError("need one family per uncertain point")
    rng = make_rng(seed)
    locs = np.stack([f.sample(rng, k) for f in fams])
    meta = {"seed": seed, "family": fams[0].kind if len(fams) == 1 or len({f.kind for f in fams}) == 1 else "mixed",
            "L": fams[0].L, "C0": max(f.C0 for f in fams)}
    return UncertainPointSet(locs[:, :, None], meta=meta)


def gen_instance_2d(n: int, k: int, family: DiskFamily2D, seed: int = 0) -> UncertainPointSet:
    _check_nk(n, k)
    rng = make_rng(seed)
    return UncertainPointSet(family.sample(rng, (n, k)),
                             meta={"seed": seed, "family": "disk", "R": family.R, "C0": family.C0})


def required_n_1d(alpha: float, k: int, delta: float) -> float:
    """Instances with ``n`` above ``8 alpha^2 (k+1)^2 ln(2/delta)`` satisfy the 1D lower bound w.h.p."""
    return 8 * alpha ** 2 * (k + 1) ** 2 * math.log(2 / delta)


def required_n_2d(R: float, eta: float, delta: float) -> float:
    return 2 * R ** 2 / eta ** 2 * math.log(2 / delta)


def binomial_slack(p: float, trials: int, z: float = 3.0) -> float:
    return z * math.sqrt(max(p * (1 - p), 1e-12) / trials)


@dataclass
class ExperimentReport:
    name: str
    params: dict
    bound: float
    mins: list
    passed: list
    support_sizes: list = field(default_factory=list)
    size_bound: float | None = None
    notes: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return len(self.mins)

    @property
    def pass_rate(self) -> float:
        return sum(self.passed) / len(self.passed) if self.passed else 0.0

    def rows(self) -> list[dict]:
        out = []
        for t, (m, ok) in enumerate(zip(self.mins, self.passed)):
            row = {"trial": t, "min_costhat": m, "bound": self.bound, "pass": int(ok)}
            if t < len(self.support_sizes):
                row["support_size"] = self.support_sizes[t]
            out.append(row)
        return out

    def summary(self) -> str:
        return (f"{self.name}: pass rate {self.pass_rate:.3f} over {self.trials} trials "
                f"(bound {self.bound:.6g}, observed min {min(self.mins):.6g})")


def experiment_min_costhat_1d(n: int, k: int, family: C0Family1D, trials: int, delta: float,
                              eps: float = 0.1, seed: int = 0, enforce_threshold: bool = True) -> ExperimentReport:
    """Exact ``min costhat`` against ``1/(4 C0 (k+1))`` over independent instances.

    On passing trials the greedy support must satisfy
    ``|T| <= 4 L C0 (k+1) (1+eps) / eps``; a larger support raises
    :class:`BoundViolation`.
    """
    need = required_n_1d(family.alpha, k, delta)
    if enforce_threshold and not n > need:
        raise InvalidInputError(f"n = {n} is below the required n > {need:.1f} (use n >= {math.floor(need) + 1})")
    bound = 1.0 / (4 * family.C0 * (k + 1))
    size_bound = 4 * family.L * family.C0 * (k + 1) * (1 + eps) / eps
    mins, passed, sizes = [], [], []
    for t in range(trials):
        P = gen_instance_1d(n, k, family, seed=make_rng(seed, t).integers(2 ** 62))
        m = min_costhat(P)
        ok = m >= bound
        T = build_support_1d(P, eps)
        if ok and len(T) > size_bound:
            raise BoundViolation(f"trial {t}: |T| = {len(T)} exceeds {size_bound:.2f}")
        mins.append(m)
        passed.append(ok)
        sizes.append(len(T))
    return ExperimentReport(
        "min_costhat_1d", {"n": n, "k": k, "family": family.kind, "L": family.L, "C0": family.C0,
                           "trials": trials, "delta": delta, "epsilon": eps, "seed": seed, "threshold_n": need},
        bound, mins, passed, sizes, size_bound,
    )


def experiment_min_costhat_2d(n: int, k: int, R: float, C0: float | None, trials: int, delta: float,
                              eta: float | None = None, resolution: int = 24, eps: float = 0.5,
                              support_trials: int = 0, seed: int = 0,
                              enforce_threshold: bool = True) -> ExperimentReport:
    """Certified grid-scan lower bound of ``min costhat`` over ``B(0, R)``
    against ``1/(4 pi R C0 (k+1)) - eta``.

    The scan covers the box ``[-R, R]^2`` and subtracts half a cell diagonal,
    so the value is a true lower bound over the whole disk. The first
    ``support_trials`` trials also build the lattice support and record
    ``|T|`` next to ``(R^2 C0)^2 k^2 / eps^2``.
    """
    fam = DiskFamily2D(R, C0)
    if eta is None:
        eta = R / (8 * math.pi * (k + 1))
    need = required_n_2d(R, eta, delta)
    if enforce_threshold and not n > need:
        raise InvalidInputError(f"n = {n} is below the required n > {need:.1f} (use n >= {math.floor(need) + 1})")
    target = 1.0 / (4 * math.pi * R * fam.C0 * (k + 1))
    bound = target - eta
    mins, passed, sizes = [], [], []
    for t in range(trials):
        P = gen_instance_2d(n, k, fam, seed=make_rng(seed, t).integers(2 ** 62))
        g = min_costhat(P, region=((-R, -R), (R, R)), resolution=resolution)
        mins.append(g.lower_bound)
        passed.append(g.lower_bound >= bound)
        if t < support_trials:
            rho = rho_lower_bound(P, "improved")
            sizes.append(len(build_support_2d(build_lattice(P, eps, rho), P)))
    envelope = (R ** 2 * fam.C0) ** 2 * k ** 2 / eps ** 2
    notes = {"target": target, "eta": eta, "envelope": envelope}
    if sizes:
        notes["size_constant"] = max(sizes) / envelope
    return ExperimentReport(
        "min_costhat_2d", {"n": n, "k": k, "R": R, "C0": fam.C0, "trials": trials, "delta": delta, "eta": eta,
                           "resolution": resolution, "epsilon": eps, "seed": seed, "threshold_n": need},
        bound, mins, passed, sizes, None, notes,
    )


def mean_nearest_spot_check(family: C0Family1D, k: int, xs, draws: int = 100_000, seed: int = 0) -> list[dict]:
    """Empirical ``E min_j |x - X_j|`` at each ``x`` with its standard error,
    next to the lower bound ``1/(2 C0 (k+1))``."""
    rng = make_rng(seed, 9)
    X = family.sample(rng, (draws, k))
    bound = 1.0 / (2 * family.C0 * (k + 1))
    out = []
    for x in np.atleast_1d(np.asarray(xs, dtype=float)):
        y = np.abs(X - x).min(axis=1)
        out.append({"x": float(x), "mean": float(y.mean()), "stderr": float(y.std(ddof=1) / math.sqrt(draws)),
                    "bound": bound})
    return out
