"""Hot numeric kernels with two interchangeable backends.

The distance scans and the logistic training loop dominate the engine's
runtime, so they are numba-jitted by default. Setting HIDESEEK_NUMBA=0 (or
running without numba installed) selects a pure-numpy fallback; both backends
implement the same arithmetic and agree to float tolerance. The active
backend is reported in BACKEND. `benchmarks/bench_kernels.py` compares the
two.
"""

from __future__ import annotations

import os

import numpy as np

_SIGMOID_CLIP = 500.0  # exp(-500) is ~7e-218; clipping keeps both backends overflow-free


def _flag_enabled() -> bool:
    return os.environ.get("HIDESEEK_NUMBA", "1").strip().lower() not in (
        "0",
        "false",
        "off",
        "no",
    )


# ---------------------------------------------------------------------------
# pure-numpy implementations


def _np_nearest_dists(query: np.ndarray, ref: np.ndarray) -> np.ndarray:
    d2 = ((query[:, None, :] - ref[None, :, :]) ** 2).sum(axis=2)
    return np.sqrt(d2.min(axis=1))


def _np_knn_mean_dists(query: np.ndarray, ref: np.ndarray, k: int) -> np.ndarray:
    k = min(k, ref.shape[0])
    d2 = ((query[:, None, :] - ref[None, :, :]) ** 2).sum(axis=2)
    smallest = np.sort(d2, axis=1)[:, :k]
    return np.sqrt(smallest).mean(axis=1)


def _np_nearest_other_dists(points: np.ndarray) -> np.ndarray:
    d2 = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    np.fill_diagonal(d2, np.inf)
    return np.sqrt(d2.min(axis=1))


def _np_logistic_ascent(design: np.ndarray, y: np.ndarray, lr: float, iters: int) -> np.ndarray:
    n = design.shape[0]
    w = np.zeros(design.shape[1])
    for _ in range(iters):
        z = np.clip(design @ w, -_SIGMOID_CLIP, _SIGMOID_CLIP)
        p = 1.0 / (1.0 + np.exp(-z))
        w = w + lr * (design.T @ (y - p)) / n
    return w


# ---------------------------------------------------------------------------
# numba implementations

try:  # pragma: no cover - exercised indirectly via backend selection
    if not _flag_enabled():
        raise ImportError("numba disabled via HIDESEEK_NUMBA")
    from numba import njit

    @njit(cache=True)
    def _nb_nearest_dists(query, ref):
        nq, d = query.shape
        nr = ref.shape[0]
        out = np.empty(nq)
        for i in range(nq):
            best = np.inf
            for j in range(nr):
                acc = 0.0
                for c in range(d):
                    diff = query[i, c] - ref[j, c]
                    acc += diff * diff
                if acc < best:
                    best = acc
            out[i] = np.sqrt(best)
        return out

    @njit(cache=True)
    def _nb_knn_mean_dists(query, ref, k):
        nq, d = query.shape
        nr = ref.shape[0]
        kk = min(k, nr)
        out = np.empty(nq)
        for i in range(nq):
            d2 = np.empty(nr)
            for j in range(nr):
                acc = 0.0
                for c in range(d):
                    diff = query[i, c] - ref[j, c]
                    acc += diff * diff
                d2[j] = acc
            d2.sort()
            total = 0.0
            for j in range(kk):
                total += np.sqrt(d2[j])
            out[i] = total / kk
        return out

    @njit(cache=True)
    def _nb_nearest_other_dists(points):
        n, d = points.shape
        out = np.empty(n)
        for i in range(n):
            best = np.inf
            for j in range(n):
                if j == i:
                    continue
                acc = 0.0
                for c in range(d):
                    diff = points[i, c] - points[j, c]
                    acc += diff * diff
                if acc < best:
                    best = acc
            out[i] = np.sqrt(best)
        return out

    @njit(cache=True)
    def _nb_logistic_ascent(design, y, lr, iters):
        n, d = design.shape
        w = np.zeros(d)
        grad = np.empty(d)
        for _ in range(iters):
            for c in range(d):
                grad[c] = 0.0
            for i in range(n):
                z = 0.0
                for c in range(d):
                    z += design[i, c] * w[c]
                if z > _SIGMOID_CLIP:
                    z = _SIGMOID_CLIP
                elif z < -_SIGMOID_CLIP:
                    z = -_SIGMOID_CLIP
                resid = y[i] - 1.0 / (1.0 + np.exp(-z))
                for c in range(d):
                    grad[c] += design[i, c] * resid
            for c in range(d):
                w[c] += lr * grad[c] / n
        return w

    BACKEND = "numba"
    nearest_dists = _nb_nearest_dists
    knn_mean_dists = _nb_knn_mean_dists
    nearest_other_dists = _nb_nearest_other_dists
    logistic_ascent = _nb_logistic_ascent

except ImportError:
    BACKEND = "numpy"
    nearest_dists = _np_nearest_dists
    knn_mean_dists = _np_knn_mean_dists
    nearest_other_dists = _np_nearest_other_dists
    logistic_ascent = _np_logistic_ascent
