"""Deterministic learners and metrics used by the quality bar and seekers.

Ridge regression is solved in closed form with an unpenalised intercept;
logistic regression is full-batch gradient ascent from a zero init, so both
are pure functions of their inputs. AUROC is the Mann-Whitney statistic with
average ranks, which equals brute-force pair counting exactly (ties 0.5).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hideseek import _kernels

LOGISTIC_LR = 0.1
LOGISTIC_ITERS = 500


class DegenerateTaskError(RuntimeError):
    """A learning task has no signal to fit (e.g. a single-class target)."""


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray  # (d,) or (d, m) for multi-output
    intercept: np.ndarray | float

    def predict(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights + self.intercept


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray
    intercept: float

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        z = np.clip(X @ self.weights + self.intercept, -500.0, 500.0)
        return 1.0 / (1.0 + np.exp(-z))


def train_ridge(X: np.ndarray, y: np.ndarray, lam: float) -> LinearModel:
    """Minimise ||Xw - y||^2 + lam * ||w||^2 with an unpenalised intercept.

    y may be a vector or an (n, m) matrix for multi-output regression.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] != y.shape[0] or X.shape[0] < 2:
        raise ValueError(f"need matching rows >= 2, got X {X.shape}, y {y.shape}")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    n = X.shape[0]
    design = np.hstack([X, np.ones((n, 1))])
    penalty = lam * np.eye(design.shape[1])
    penalty[-1, -1] = 0.0
    gram = design.T @ design + penalty
    coef = np.linalg.solve(gram, design.T @ y)
    return LinearModel(weights=coef[:-1], intercept=coef[-1])


def logistic_gradient(X: np.ndarray, y: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Mean log-likelihood gradient at `weights` (intercept as last column)."""
    z = np.clip(X @ weights, -500.0, 500.0)
    p = 1.0 / (1.0 + np.exp(-z))
    return X.T @ (y - p) / X.shape[0]


def train_logistic(
    X: np.ndarray,
    y: np.ndarray,
    lr: float = LOGISTIC_LR,
    iters: int = LOGISTIC_ITERS,
) -> LogisticModel:
    """Full-batch gradient ascent on the mean log-likelihood, zero init."""
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64)
    classes = np.unique(y)
    if not np.all(np.isin(classes, (0.0, 1.0))):
        raise ValueError(f"labels must be 0/1, got {classes}")
    if classes.size < 2:
        raise DegenerateTaskError("logistic target has a single class")
    design = np.hstack([X, np.ones((X.shape[0], 1))])
    w = _kernels.logistic_ascent(design, y, float(lr), int(iters))
    return LogisticModel(weights=w[:-1], intercept=float(w[-1]))


def rmse(predicted: np.ndarray, target: np.ndarray) -> float:
    predicted = np.asarray(predicted, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    return float(np.sqrt(np.mean((predicted - target) ** 2)))


def auroc(scores: np.ndarray, labels: np.ndarray) -> float:
    """P(random positive scored above random negative), ties counting 0.5."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateTaskError("AUROC needs both classes present")
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(scores.size, dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0  # average rank, 1-based
        i = j + 1
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
