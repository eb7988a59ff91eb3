import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hideseek.learners import (
    DegenerateTaskError,
    auroc,
    logistic_gradient,
    rmse,
    train_logistic,
    train_ridge,
)


def brute_force_auroc(scores, labels):
    """Count correctly ordered (positive, negative) pairs; ties are half."""
    scores = np.asarray(scores, dtype=float)
    pos = scores[np.asarray(labels) == 1]
    neg = scores[np.asarray(labels) == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def gradient_descent_least_squares(X, y, lam, iters=200_000, lr=None):
    """Independent slow oracle for the ridge objective (intercept unpenalised)."""
    design = np.hstack([X, np.ones((X.shape[0], 1))])
    penalty = np.full(design.shape[1], lam)
    penalty[-1] = 0.0
    w = np.zeros(design.shape[1])
    if lr is None:
        hess_bound = np.linalg.eigvalsh(2 * design.T @ design).max() + 2 * lam
        lr = 1.0 / hess_bound
    for _ in range(iters):
        grad = 2 * design.T @ (design @ w - y) + 2 * penalty * w
        w = w - lr * grad
    return w[:-1], w[-1]


def test_ridge_exact_fit_recovery():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((40, 3))
    w0 = np.array([1.5, -2.0, 0.25])
    y = X @ w0 + 0.75
    model = train_ridge(X, y, 1e-8)
    assert np.allclose(model.weights, w0, atol=1e-4)
    assert model.intercept == pytest.approx(0.75, abs=1e-4)


def test_ridge_zero_design_gives_mean_intercept():
    X = np.zeros((6, 2))
    y = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    model = train_ridge(X, y, 1.0)
    assert np.allclose(model.weights, 0.0)
    assert model.intercept == pytest.approx(y.mean())


def test_ridge_matches_normal_equations_oracle():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((20, 3))
    y = rng.standard_normal(20)
    lam = 0.7
    model = train_ridge(X, y, lam)
    design = np.hstack([X, np.ones((20, 1))])
    penalty = lam * np.eye(4)
    penalty[-1, -1] = 0.0
    coef = np.linalg.inv(design.T @ design + penalty) @ design.T @ y
    assert np.allclose(np.append(model.weights, model.intercept), coef, atol=1e-8)


def test_ridge_matches_gradient_descent_oracle():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((30, 5))
    y = rng.standard_normal(30)
    model = train_ridge(X, y, 2.5)
    w_gd, b_gd = gradient_descent_least_squares(X, y, 2.5)
    assert np.allclose(model.weights, w_gd, atol=1e-6)
    assert model.intercept == pytest.approx(b_gd, abs=1e-6)


def test_ridge_multi_output():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((25, 4))
    Y = rng.standard_normal((25, 3))
    model = train_ridge(X, Y, 1.0)
    for j in range(3):
        single = train_ridge(X, Y[:, j], 1.0)
        assert np.allclose(model.weights[:, j], single.weights)
        assert model.intercept[j] == pytest.approx(float(single.intercept))


def test_logistic_separates_1d():
    X = np.array([[-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0]])
    y = np.array([0, 0, 0, 1, 1, 1])
    model = train_logistic(X, y)
    assert np.all((model.predict_proba(X) > 0.5) == y.astype(bool))


def test_logistic_independent_labels_near_chance():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((200, 3))
    y = (rng.random(200) < 0.5).astype(int)
    model = train_logistic(X, y)
    assert auroc(model.predict_proba(X), y) == pytest.approx(0.5, abs=0.1)


def test_logistic_gradient_analytic_and_finite_difference():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((40, 3))
    y = (rng.random(40) < 0.5).astype(float)
    design = np.hstack([X, np.ones((40, 1))])
    w0 = np.zeros(4)
    grad = logistic_gradient(design, y, w0)
    assert np.allclose(grad, design.T @ (y - 0.5) / 40, atol=1e-12)

    def loglik(w):
        z = design @ w
        return float(np.mean(y * z - np.log1p(np.exp(z))))

    eps = 1e-6
    w = rng.standard_normal(4) * 0.3
    grad_w = logistic_gradient(design, y, w)
    for i in range(4):
        step = np.zeros(4)
        step[i] = eps
        numeric = (loglik(w + step) - loglik(w - step)) / (2 * eps)
        assert grad_w[i] == pytest.approx(numeric, abs=1e-5)


def test_logistic_single_class_error():
    with pytest.raises(DegenerateTaskError):
        train_logistic(np.zeros((4, 1)), np.zeros(4))


def test_rmse_basic():
    assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(np.sqrt(12.5))


def test_auroc_perfect_and_reversed():
    assert auroc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0
    assert auroc([0.1, 0.2, 0.8, 0.9], [1, 1, 0, 0]) == 0.0
    assert auroc([0.5, 0.5, 0.5, 0.5], [1, 1, 0, 0]) == 0.5


def test_auroc_needs_both_classes():
    with pytest.raises(DegenerateTaskError):
        auroc([0.1, 0.2], [1, 1])


@settings(max_examples=300, deadline=None)
@given(
    data=st.lists(
        st.tuples(st.integers(min_value=-5, max_value=5), st.booleans()),
        min_size=2,
        max_size=20,
    )
)
def test_auroc_equals_brute_force_pair_counting(data):
    scores = np.array([s for s, _ in data], dtype=float) / 2.0
    labels = np.array([int(b) for _, b in data])
    if labels.min() == labels.max():
        return
    assert auroc(scores, labels) == brute_force_auroc(scores, labels)
