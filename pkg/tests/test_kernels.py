import importlib
import subprocess
import sys

import numpy as np
import pytest

from gfan import kernels
from gfan.mutation import mutate_matrix

rng = np.random.default_rng(5)


def _random_matrices(count, n):
    mats = []
    for _ in range(count):
        S = np.triu(rng.integers(-3, 4, size=(n, n)), 1)
        S = S - S.T
        D = np.diag(rng.integers(1, 3, size=n))
        mats.append(np.vstack([D @ S, np.eye(n, dtype=np.int64)]))
    return np.array(mats, dtype=np.int64)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_mutate_batch_matches_python(n):
    mats = _random_matrices(300, n)
    ks = rng.integers(0, n, size=len(mats))
    got = kernels.mutate_batch_numpy(mats, ks)
    for A, k, out in zip(mats, ks, got):
        assert tuple(map(tuple, out.tolist())) == mutate_matrix(A.tolist(), int(k) + 1)


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not importable")
def test_numba_and_numpy_agree():
    mats = _random_matrices(500, 3)
    ks = rng.integers(0, 3, size=len(mats))
    assert np.array_equal(kernels.mutate_batch_numba(mats, ks), kernels.mutate_batch_numpy(mats, ks))
    adj = rng.integers(-20, 21, size=(40, 3, 3)).astype(np.int64)
    signs = rng.choice([-1, 1], size=40).astype(np.int64)
    rays = rng.integers(-100, 101, size=(3000, 3)).astype(np.int64)
    assert np.array_equal(kernels.count_members_numba(adj, signs, rays),
                          kernels.count_members_numpy(adj, signs, rays))


def test_disable_switch():
    code = "from gfan import kernels; print(kernels.backend())"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"GFAN_DISABLE_NUMBA": "1", "PATH": ""}, check=True)
    assert out.stdout.strip() == "numpy"


def test_coverage_same_on_both_backends(no_numba):
    from gfan.fan import coverage_estimate, explore
    with_default = coverage_estimate(explore(((0, -1), (4, 0)), 10), 4000, 7)
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.backend() == "numpy"
        assert coverage_estimate(explore(((0, -1), (4, 0)), 10), 4000, 7) == with_default
    finally:
        no_numba.pop("GFAN_DISABLE_NUMBA", None)
        importlib.reload(kernels)
