"""JSON / CSV readers and writers for instances, supports and distributions.

Floats are written with ``repr`` (shortest string that round-trips exactly).
CSV indices are 1-based.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .model import MedianDistribution, UncertainPointSet
from .support1d import SupportSet

__all__ = [
    "instance_to_dict",
    "instance_from_dict",
    "instance_from_csv",
    "load_instance",
    "support_to_dict",
    "support_from_dict",
    "distribution_to_dict",
    "distribution_from_dict",
    "dumps",
    "read_json",
]


def _floats(a) -> list:
    return [float(v) for v in np.atleast_1d(a)]


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None


def instance_to_dict(P: UncertainPointSet) -> dict:
    return {
        "dim": P.dim,
        "n": P.n,
        "k": P.k,
        "points": [[_floats(P.locations[i, j]) for j in range(P.k)] for i in range(P.n)],
        "meta": dict(P.meta),
    }


def instance_from_dict(doc: dict) -> UncertainPointSet:
    try:
        dim, n, k, pts = int(doc["dim"]), int(doc["n"]), int(doc["k"]), doc["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"instance file is missing or has a bad field: {exc}") from None
    if len(pts) != n:
        raise InvalidInputError(f"expected {n} uncertain points, found {len(pts)}")
    for i, row in enumerate(pts):
        if len(row) != k:
            raise InvalidInputError(f"ragged k: point {i} has {len(row)} locations, expected {k}")
        for j, loc in enumerate(row):
            if not isinstance(loc, list) or len(loc) != dim:
                raise InvalidInputError(f"location ({i}, {j}) does not have dim {dim}")
    return UncertainPointSet(np.array(pts, dtype=np.float64).reshape(n, k, dim), meta=dict(doc.get("meta") or {}))


def instance_from_csv(text: str) -> UncertainPointSet:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise InvalidInputError("empty CSV")
    header = [h.strip() for h in rows[0]]
    if header not in (["i", "j", "x"], ["i", "j", "x", "y"]):
        raise InvalidInputError(f"CSV header must be i,j,x or i,j,x,y, got {','.join(header)}")
    dim = len(header) - 2
    cells = {}
    for line, r in enumerate(rows[1:], start=2):
        if not r:
            continue
        if len(r) != len(header):
            raise InvalidInputError(f"CSV line {line}: expected {len(header)} fields")
        try:
            i, j = int(r[0]), int(r[1])
            coords = [float(v) for v in r[2:]]
        except ValueError:
            raise InvalidInputError(f"CSV line {line}: bad number") from None
        if (i, j) in cells:
            raise InvalidInputError(f"CSV line {line}: duplicate location ({i}, {j})")
        cells[(i, j)] = coords
    if not cells:
        raise InvalidInputError("CSV has no locations")
    n = max(i for i, _ in cells)
    k = max(j for _, j in cells)
    if min(i for i, _ in cells) < 1 or min(j for _, j in cells) < 1 or len(cells) != n * k:
        raise InvalidInputError(f"CSV must list every (i, j) in 1..{n} x 1..{k} exactly once")
    arr = np.array([[cells[(i, j)] for j in range(1, k + 1)] for i in range(1, n + 1)], dtype=np.float64)
    return UncertainPointSet(arr.reshape(n, k, dim))


def load_instance(path) -> UncertainPointSet:
    p = Path(path)
    if p.suffix.lower() == ".csv":
        try:
            return instance_from_csv(p.read_text())
        except OSError as exc:
            raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    return instance_from_dict(read_json(p))


def support_to_dict(T: SupportSet) -> dict:
    return {
        "epsilon": T.epsilon,
        "points": [{"loc": _floats(z), "costhat": float(c), "radius": float(r)}
                   for z, c, r in zip(T.points, T.costhat, T.radius)],
        "construction": T.construction,
        "rho": T.rho,
        "size": len(T),
        "stats": T.stats,
    }


def support_from_dict(doc: dict) -> SupportSet:
    try:
        pts = doc["points"]
        locs = np.array([p["loc"] for p in pts], dtype=np.float64)
        ch = np.array([p["costhat"] for p in pts], dtype=np.float64)
        rad = np.array([p["radius"] for p in pts], dtype=np.float64)
        eps = float(doc["epsilon"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"support file is missing or has a bad field: {exc}") from None
    if locs.ndim != 2:
        locs = locs.reshape(len(pts), -1)
    return SupportSet(locs, ch, eps, doc.get("construction", "greedy1d"), radius=rad, rho=doc.get("rho"),
                      stats=dict(doc.get("stats") or {}))


def distribution_to_dict(dist: MedianDistribution, mode: str, seed=None, rounds=None) -> dict:
    support = []
    for loc, w in zip(dist.locs, dist.weights):
        entry = {"loc": _floats(loc), "weight": float(w)}
        if dist.kind == "exact":
            entry["weight_rational"] = f"{w.numerator}/{w.denominator}"
        support.append(entry)
    return {"mode": mode, "support": support, "uncovered_mass": float(dist.uncovered_mass), "seed": seed,
            "rounds": rounds}


def distribution_from_dict(doc: dict) -> MedianDistribution:
    try:
        sup = doc["support"]
        locs = np.array([s["loc"] for s in sup], dtype=np.float64).reshape(len(sup), -1)
        if doc["mode"] == "exact":
            weights = [Fraction(s["weight_rational"]) for s in sup]
            return MedianDistribution(locs, weights, kind="exact")
        weights = [float(s["weight"]) for s in sup]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"distribution file is missing or has a bad field: {exc}") from None
    return MedianDistribution(locs, weights, kind="floating", uncovered_mass=float(doc.get("uncovered_mass", 0.0)))
