"""``umedian`` command line.

Exit codes: 0 success, 1 other error, 2 usage, 3 resource limit,
4 degenerate instance, 5 audit or assertion failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .errors import (AuditFailure, DegenerateInstanceError, InvalidInputError, ResourceLimitError,
                     UMedianError)
from .estimate import median_gap
from .formats import (distribution_to_dict, dumps, instance_to_dict, load_instance, read_json,
                      support_from_dict, support_to_dict)
from .generators import (C0Family1D, DiskFamily2D, experiment_min_costhat_1d, experiment_min_costhat_2d,
                         gen_instance_1d, gen_instance_2d, required_n_1d, required_n_2d)
from .oracle import DEFAULT_CAP, coverage_audit, enumerate_binned, enumerate_point_weights
from .pipeline import build_support, exact_distribution
from .support2d import DEFAULT_LATTICE_CAP
from .weights_exact import aggregate_weights, point_weights_1d
from .weights_mc import McConfig, mc_weights, rounds_needed, sampled_support

EXIT_USAGE, EXIT_RESOURCE, EXIT_DEGENERATE, EXIT_AUDIT = 2, 3, 4, 5


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text}")
    return v


def _float_list(text: str) -> list[float]:
    return [_positive_float(t) for t in text.split(",") if t]


def _int_list(text: str) -> list[int]:
    return [_positive_int(t) for t in text.split(",") if t]


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "out")}


def _emit(doc: dict, out) -> None:
    text = dumps(doc)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _write_csv(path, rows: list[dict]) -> None:
    if not path or not rows:
        return
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


def cmd_gen(args) -> dict:
    if args.dim == 1:
        if args.family == "uniform":
            fam = C0Family1D.uniform(args.L)
        else:
            if args.c0 is None:
                raise InvalidInputError("--family capped needs --c0")
            fam = C0Family1D.capped(args.L, args.c0, segments=args.segments, seed=args.seed)
        P = gen_instance_1d(args.n, args.k, fam, seed=args.seed)
    else:
        if args.family == "capped" and args.c0 is None:
            raise InvalidInputError("--family capped needs --c0")
        fam2 = DiskFamily2D(args.R, args.c0 if args.family == "capped" else None)
        P = gen_instance_2d(args.n, args.k, fam2, seed=args.seed)
    doc = instance_to_dict(P)
    doc["meta"]["config"] = _config(args)
    return doc


def cmd_support(args) -> dict:
    P = load_instance(args.input)
    T = build_support(P, args.epsilon, args.rho_mode, args.lattice_cap)
    doc = support_to_dict(T)
    doc["config"] = _config(args)
    return doc


def cmd_weights(args) -> dict:
    P = load_instance(args.input)
    T = support_from_dict(read_json(args.support)) if args.support else None
    if args.mode == "exact":
        dist = exact_distribution(P, T)
        doc = distribution_to_dict(dist, "exact")
    else:
        if args.epsilon is None:
            raise InvalidInputError(f"--mode {args.mode} needs --epsilon")
        cfg = McConfig(args.epsilon, args.delta, args.rounds, args.vc_constant, args.phi, args.seed,
                       strict=args.strict)
        if args.mode == "sampled":
            dist = sampled_support(P, cfg)
        else:
            if T is None:
                T = build_support(P, args.epsilon)
            dist = mc_weights(P, T, cfg)
        doc = distribution_to_dict(dist, args.mode, seed=args.seed, rounds=dist.meta["rounds"])
        doc["phi"] = dist.meta["phi"]
    doc["config"] = _config(args)
    return doc


def cmd_estimate(args) -> dict:
    P = load_instance(args.input)
    if P.dim != 1:
        raise InvalidInputError("estimate needs a 1D instance")
    rep = median_gap(P, args.epsilon)
    return {"m_T": rep.m_T, "m_P": rep.m_P, "gap": rep.gap, "bound": rep.bound, "holds": rep.holds,
            "support_size": rep.support_size, "config": _config(args)}


def cmd_oracle(args) -> dict:
    P = load_instance(args.input)
    T = support_from_dict(read_json(args.support)) if args.support else build_support(P, args.epsilon)
    phi = args.phi if args.phi is not None else (0.0 if P.dim == 1 else T.epsilon / 10)
    doc: dict = {"config": _config(args), "traversals": P.k ** P.n}
    if P.dim == 1:
        w_enum = enumerate_point_weights(P, args.cap)
        w_dp = point_weights_1d(P)
        doc["point_weights_match"] = w_enum == w_dp
        binned = enumerate_binned(P, T, cap=args.cap)
        doc["binned_match"] = (binned.kind == "exact" and binned.weights == aggregate_weights(w_dp, P, T).weights)
    else:
        binned = enumerate_binned(P, T, phi=phi, cap=args.cap)
        doc["binned_mass"] = float(sum(binned.float_weights()))
    doc["uncovered_mass"] = float(binned.uncovered_mass)
    audit = coverage_audit(P, T, phi=max(phi, 1e-9), cap=args.cap)
    doc["coverage"] = {"passed": audit.passed, "max_ratio": audit.max_ratio, "failures": audit.failures[:10]}
    ok = audit.passed and doc.get("point_weights_match", True) and doc.get("binned_match", True)
    doc["passed"] = ok
    if not ok:
        _emit(doc, args.out)
        raise AuditFailure(f"oracle check failed: {audit.summary()}")
    return doc


def _bench_mc_error(args) -> tuple[dict, list]:
    fam = C0Family1D.uniform(1.0)
    P = gen_instance_1d(args.n or 7, args.k, fam, seed=args.seed)
    T = build_support(P, args.epsilon[0])
    truth = np.array([float(w) for w in aggregate_weights(point_weights_1d(P), P, T).weights])
    rows = []
    for N in args.rounds_list:
        for s in range(args.trials):
            est = mc_weights(P, T, McConfig(args.epsilon[0], rounds=N, seed=s))
            rows.append({"rounds": N, "seed": s, "max_bin_error": float(np.abs(est.float_weights() - truth).max())})
    summary = {N: float(np.mean([r["max_bin_error"] for r in rows if r["rounds"] == N])) for N in args.rounds_list}
    return {"mean_max_bin_error": summary, "reference_rounds": rounds_needed(args.epsilon[0], args.delta, 1)}, rows


def cmd_bench(args) -> dict:
    exp = args.experiment
    if exp == "min-costhat-1d":
        fam = C0Family1D.uniform(args.L) if args.family == "uniform" else C0Family1D.capped(args.L, args.c0 or 2.0 / args.L, seed=args.seed)
        need = required_n_1d(fam.alpha, args.k, args.delta)
        n = args.n or math.ceil(4 * need)
        rep = experiment_min_costhat_1d(n, args.k, fam, args.trials, args.delta, eps=args.epsilon[0], seed=args.seed)
        result, rows = {"pass_rate": rep.pass_rate, "bound": rep.bound, "max_support": max(rep.support_sizes),
                        "size_bound": rep.size_bound, "n": n}, rep.rows()
        result["target_pass_rate"] = 1 - args.delta
    elif exp == "min-costhat-2d":
        eta = args.R / (8 * math.pi * (args.k + 1))
        need = required_n_2d(args.R, eta, args.delta)
        n = args.n or math.floor(need) + 1
        rep = experiment_min_costhat_2d(n, args.k, args.R, args.c0, args.trials, args.delta, eta=eta,
                                        seed=args.seed, support_trials=args.support_trials)
        result, rows = {"pass_rate": rep.pass_rate, "bound": rep.bound, "n": n, **rep.notes,
                        "target_pass_rate": 1 - args.delta}, rep.rows()
    elif exp == "support-size":
        P = gen_instance_1d(args.n or 1000, args.k, C0Family1D.uniform(args.L), seed=args.seed)
        rows = [{"epsilon": e, "support_size": len(build_support(P, e))} for e in args.epsilon]
        result = {"n": P.n}
    else:
        result, rows = _bench_mc_error(args)
    _write_csv(args.csv, rows)
    line = f"{exp}: " + ", ".join(f"{k}={v}" for k, v in result.items() if not isinstance(v, dict))
    print(line, file=sys.stderr)
    return {"experiment": exp, "result": result, "config": _config(args)}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="umedian", description="Median distributions of uncertain points.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--dim", type=int, choices=[1, 2], default=1)
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--k", type=_positive_int, required=True)
    g.add_argument("--family", choices=["uniform", "capped"], default="uniform")
    g.add_argument("--L", type=_positive_float, default=1.0)
    g.add_argument("--R", type=_positive_float, default=1.0)
    g.add_argument("--c0", type=_positive_float)
    g.add_argument("--segments", type=_positive_int, default=16)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("support", help="build the approximate support T")
    s.add_argument("--input", required=True)
    s.add_argument("--epsilon", type=_positive_float, required=True)
    s.add_argument("--rho-mode", choices=["fast", "improved"], default="improved")
    s.add_argument("--lattice-cap", type=_positive_int, default=DEFAULT_LATTICE_CAP)
    s.add_argument("--out")
    s.set_defaults(func=cmd_support)

    w = sub.add_parser("weights", help="median distribution weights")
    w.add_argument("--input", required=True)
    w.add_argument("--support")
    w.add_argument("--mode", choices=["exact", "mc", "sampled"], default="exact")
    w.add_argument("--epsilon", type=_positive_float)
    w.add_argument("--delta", type=_positive_float, default=0.05)
    w.add_argument("--rounds", type=_positive_int)
    w.add_argument("--vc-constant", type=_positive_float, default=4.0)
    w.add_argument("--phi", type=float)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--strict", action="store_true", help="fail when too many medians are uncovered")
    w.add_argument("--out")
    w.set_defaults(func=cmd_weights)

    e = sub.add_parser("estimate", help="weighted medians over T and P_all and their gap")
    e.add_argument("--input", required=True)
    e.add_argument("--epsilon", type=_positive_float, required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_estimate)

    o = sub.add_parser("oracle", help="brute-force checks over all traversals")
    o.add_argument("--input", required=True)
    o.add_argument("--support")
    o.add_argument("--epsilon", type=_positive_float, default=0.1)
    o.add_argument("--phi", type=float)
    o.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="statistical experiments with CSV output")
    b.add_argument("--experiment", choices=["min-costhat-1d", "min-costhat-2d", "support-size", "mc-error"],
                   default="min-costhat-1d")
    b.add_argument("--n", type=_positive_int)
    b.add_argument("--k", type=_positive_int, default=2)
    b.add_argument("--family", choices=["uniform", "capped"], default="uniform")
    b.add_argument("--L", type=_positive_float, default=1.0)
    b.add_argument("--R", type=_positive_float, default=1.0)
    b.add_argument("--c0", type=_positive_float)
    b.add_argument("--trials", type=_positive_int, default=200)
    b.add_argument("--delta", type=_positive_float, default=0.1)
    b.add_argument("--epsilon", type=_float_list, default=[0.1])
    b.add_argument("--rounds-list", type=_int_list, default=[100, 400, 1600])
    b.add_argument("--support-trials", type=int, default=0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except InvalidInputError as exc:
        print(f"umedian: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"umedian: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DegenerateInstanceError as exc:
        print(f"umedian: degenerate instance: {exc}; try `umedian weights --mode sampled`", file=sys.stderr)
        return EXIT_DEGENERATE
    except AuditFailure as exc:
        print(f"umedian: check failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except UMedianError as exc:
        print(f"umedian: {exc}", file=sys.stderr)
        return 1
    _emit(doc, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
