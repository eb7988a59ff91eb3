import os
import subprocess
import sys

import numpy as np
import pytest

from hideseek import _kernels as K


@pytest.fixture(scope="module")
def arrays():
    rng = np.random.default_rng(11)
    return rng.standard_normal((40, 7)), rng.standard_normal((25, 7))


needs_numba = pytest.mark.skipif(
    K.BACKEND != "numba", reason="numba backend not active"
)


@needs_numba
def test_nearest_dists_backends_agree(arrays):
    q, r = arrays
    assert np.allclose(K._np_nearest_dists(q, r), K._nb_nearest_dists(q, r), atol=1e-12)


@needs_numba
def test_knn_mean_dists_backends_agree(arrays):
    q, r = arrays
    for k in (1, 3, 5, 100):  # k beyond the reference size clamps
        assert np.allclose(
            K._np_knn_mean_dists(q, r, k), K._nb_knn_mean_dists(q, r, k), atol=1e-12
        )


@needs_numba
def test_nearest_other_dists_backends_agree(arrays):
    q, _ = arrays
    assert np.allclose(
        K._np_nearest_other_dists(q), K._nb_nearest_other_dists(q), atol=1e-12
    )


@needs_numba
def test_logistic_backends_agree(arrays):
    rng = np.random.default_rng(12)
    X = np.hstack([arrays[0], np.ones((arrays[0].shape[0], 1))])
    y = (rng.random(X.shape[0]) < 0.5).astype(np.float64)
    w_np = K._np_logistic_ascent(X, y, 0.1, 500)
    w_nb = K._nb_logistic_ascent(X, y, 0.1, 500)
    assert np.allclose(w_np, w_nb, atol=1e-9)


def test_nearest_dists_matches_naive(arrays):
    q, r = arrays
    naive = np.array([min(np.linalg.norm(qi - rj) for rj in r) for qi in q])
    assert np.allclose(K.nearest_dists(q, r), naive, atol=1e-12)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, HIDESEEK_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c", "from hideseek import _kernels; print(_kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
