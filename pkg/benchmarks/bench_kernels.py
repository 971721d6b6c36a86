"""Compare the compiled and NumPy kernel backends on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from umedian import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def workloads(rng):
    locs = rng.uniform(0, 10, (2000, 4, 2))
    queries = rng.uniform(0, 10, (2000, 2))
    Q = rng.uniform(-5, 5, (200, 2))
    pts = rng.uniform(0, 1, (20_000, 2))
    pts = pts[np.lexsort((pts[:, 0], pts[:, 1]))]
    radii = np.full(len(pts), 0.01)
    n, k = 300, 8

    def poly(backend):
        coeffs = [k ** n] + [0] * n
        below = [0] * n
        order = rng.permutation(np.repeat(np.arange(n), k))
        for i in order:
            backend.poly_advance(coeffs, below[i], k, (n - 1) // 2)
            below[i] += 1

    return {
        "costhat_many 2000x(2000x4)": lambda b: b.costhat_many(queries, locs),
        "weiszfeld n=200": lambda b: b.weiszfeld(Q, 1e-9, 10_000, False),
        "greedy_cover 20k points": lambda b: b.greedy_cover(pts, radii),
        "poly_advance n=300 k=8": poly,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backends = [("python", _kernels.python_backend)]
    if _kernels.compiled_backend is not None:
        backends.append(("cython", _kernels.compiled_backend))
    else:
        print("compiled backend not built; reporting the NumPy fallback only")
    print(f"{'workload':32s} " + " ".join(f"{name:>10s}" for name, _ in backends) + "   speedup")
    for label, fn in workloads(np.random.default_rng(args.seed)).items():
        secs = [best_of(lambda b=b: fn(b), args.repeat) for _, b in backends]
        speed = f"{secs[0] / secs[-1]:8.1f}x" if len(secs) > 1 else ""
        print(f"{label:32s} " + " ".join(f"{s:10.4f}" for s in secs) + f"  {speed}")


if __name__ == "__main__":
    main()
