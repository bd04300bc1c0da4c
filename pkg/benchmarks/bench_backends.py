#!/usr/bin/env python3
"""Benchmark the compiled step kernels against the pure-numpy fallback.

Usage:
    python benchmarks/bench_backends.py [--ns 20000] [--ms 1000] [--reps 3]

Reports per-step wall time for both operators on every available backend,
plus the threaded speedup of the compiled kernel.
"""

import argparse
import time

import numpy as np

from polarscale import kernels


def _samples(ns: int) -> np.ndarray:
    x = np.arange(ns + 1) / ns
    h = (x * (1 - x)) ** 0.75
    return h / h.max()


def bench(ns: int, ms: int, reps: int) -> None:
    h = _samples(ns)
    rows = []
    for backend in kernels.available_backends():
        for operator, inner in (("bec", 1), ("bmsc", ms)):
            best = float("inf")
            for _ in range(reps):
                t0 = time.perf_counter()
                out = kernels.run_step(h, operator, ms=inner, backend=backend)
                best = min(best, time.perf_counter() - t0)
            rows.append((backend, operator, best, out.max()))
    print(f"ns={ns} ms={ms} (best of {reps})")
    print(f"{'backend':>8} {'operator':>8} {'step time':>12} {'checksum':>12}")
    for backend, operator, best, chk in rows:
        print(f"{backend:>8} {operator:>8} {best * 1e3:>10.1f}ms {chk:>12.6f}")
    if "cython" in kernels.available_backends():
        for threads in (1, 2, 4):
            t0 = time.perf_counter()
            kernels.run_step(h, "bmsc", ms=ms, backend="cython", threads=threads)
            dt = time.perf_counter() - t0
            print(f"cython bmsc threads={threads}: {dt * 1e3:.1f}ms")
    # cross-backend agreement at full precision
    if len(kernels.available_backends()) > 1:
        a = kernels.run_step(h, "bmsc", ms=ms, backend="cython")
        b = kernels.run_step(h, "bmsc", ms=ms, backend="numpy")
        print(f"max |cython - numpy| = {np.abs(a - b).max():.3e}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--ns", type=int, default=20_000)
    parser.add_argument("--ms", type=int, default=1_000)
    parser.add_argument("--reps", type=int, default=3)
    args = parser.parse_args()
    bench(args.ns, args.ms, args.reps)
