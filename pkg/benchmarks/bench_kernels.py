#!/usr/bin/env python3
"""Benchmark the compiled scan kernels against the NumPy fallback.

Usage:
    python benchmarks/bench_kernels.py [--dims 2000x100] [--k 40]
                                       [--repeats 3] [--threads N]
"""

import argparse
import time

import numpy as np

from eigensurf import kernels


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", default="2000x100",
                        help="matrix dims, e.g. 2000x100")
    parser.add_argument("--k", type=int, default=40, help="window size")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args()

    m, n = (int(p) for p in args.dims.lower().split("x"))
    rng = np.random.default_rng(0)
    control = rng.normal(size=(m, n))
    deformed = control + 0.1 * rng.normal(size=(m, n))
    grid = (m - args.k + 1, n - args.k + 1)

    backends = kernels.available_backends()
    print(f"matrix {m}x{n}, k={args.k}, grid {grid[0]}x{grid[1]} "
          f"({grid[0] * grid[1]} windows), threads={args.threads or 'auto'}")
    print(f"backends: {', '.join(backends)}")
    print()
    print(f"{'scan':<14}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")

    jobs = {
        "eigen (trace)": lambda b: kernels.eigen_scan(
            control, args.k, mode="eigen", threads=args.threads, backend=b),
        "svd (nuclear)": lambda b: kernels.eigen_scan(
            control, args.k, mode="svd", threads=args.threads, backend=b),
        "jacobian": lambda b: kernels.jacobian_scan(
            control, deformed, args.k, threads=args.threads, backend=b),
    }
    for name, job in jobs.items():
        times = {b: time_call(lambda: job(b), args.repeats) for b in backends}
        row = f"{name:<14}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)

        if len(backends) == 2:
            outs = [job(b) for b in backends]
            gap = np.max(np.abs(outs[0] - outs[1]))
            if gap > 1e-9:
                raise SystemExit(f"backend mismatch on {name}: {gap}")


if __name__ == "__main__":
    main()
