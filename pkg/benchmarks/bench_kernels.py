#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on engine-shaped inputs (summary matrices, attack
features, logistic training) with both backends in-process and prints a
timing table plus the max absolute disagreement. The first numba call pays
JIT compilation; a warm-up run is excluded from timings.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hideseek import _kernels as K

CASES = [
    ("nearest_dists 2000x200x65", "nearest", (2000, 200, 65)),
    ("knn_mean_dists 2000x200x65 k=5", "knn", (2000, 200, 65)),
    ("nearest_other_dists 1200x65", "other", (1200, 65)),
    ("logistic_ascent 4000x16 500it", "logistic", (4000, 16)),
]


def _inputs(kind: str, shape, rng):
    if kind in ("nearest", "knn"):
        nq, nr, d = shape
        return rng.standard_normal((nq, d)), rng.standard_normal((nr, d))
    if kind == "other":
        n, d = shape
        return (rng.standard_normal((n, d)),)
    n, d = shape
    X = rng.standard_normal((n, d))
    y = (rng.random(n) < 0.5).astype(np.float64)
    return X, y


def _call(fns, kind: str, args):
    if kind == "nearest":
        return fns[0](*args)
    if kind == "knn":
        return fns[1](*args, 5)
    if kind == "other":
        return fns[2](*args)
    return fns[3](np.hstack([args[0], np.ones((args[0].shape[0], 1))]), args[1], 0.1, 500)


def _time(fn_args, repeats):
    fns, kind, args = fn_args
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = _call(fns, kind, args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    numpy_fns = (
        K._np_nearest_dists,
        K._np_knn_mean_dists,
        K._np_nearest_other_dists,
        K._np_logistic_ascent,
    )
    try:
        numba_fns = (
            K._nb_nearest_dists,
            K._nb_knn_mean_dists,
            K._nb_nearest_other_dists,
            K._nb_logistic_ascent,
        )
    except AttributeError:
        numba_fns = None
        print("numba backend unavailable (HIDESEEK_NUMBA=0 or numba missing); "
              "timing numpy only\n")

    rng = np.random.default_rng(0)
    print(f"active backend: {K.BACKEND}\n")
    header = f"{'kernel':38} {'numpy':>10} {'numba':>10} {'speedup':>8} {'max|diff|':>10}"
    print(header)
    print("-" * len(header))
    for label, kind, shape in CASES:
        inputs = _inputs(kind, shape, rng)
        t_np, out_np = _time((numpy_fns, kind, inputs), args.repeats)
        if numba_fns is None:
            print(f"{label:38} {t_np*1e3:9.1f}ms {'-':>10} {'-':>8} {'-':>10}")
            continue
        _call(numba_fns, kind, inputs)  # JIT warm-up
        t_nb, out_nb = _time((numba_fns, kind, inputs), args.repeats)
        diff = float(np.max(np.abs(out_np - out_nb)))
        print(
            f"{label:38} {t_np*1e3:9.1f}ms {t_nb*1e3:9.1f}ms "
            f"{t_np/t_nb:7.1f}x {diff:10.2e}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
