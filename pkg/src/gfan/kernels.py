"""Integer kernels for batched work: matrix mutation and cone membership.

Both kernels have a numba implementation and a pure-numpy fallback. Setting
``GFAN_DISABLE_NUMBA=1`` (or running without numba installed) selects the
numpy path. The two paths must agree exactly; the test-suite checks this.
All arithmetic is int64, callers guard the magnitude of their inputs.
"""
from __future__ import annotations

import os

import numpy as np

INT64_SAFE = 2 ** 62


def _numba_wanted() -> bool:
    return os.environ.get("GFAN_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")


try:
    if not _numba_wanted():
        raise ImportError("numba disabled by environment")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def mutate_batch_numpy(mats: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Mutate each m x n matrix in ``mats`` at its 0-based index in ``ks``."""
    out = mats.copy()
    for b in range(mats.shape[0]):
        A = mats[b]
        k = int(ks[b])
        col = A[:, k][:, None]
        row = A[k, :][None, :]
        new = A + col * np.maximum(row, 0) + np.maximum(-col, 0) * row
        new[:, k] = -A[:, k]
        new[k, :] = -A[k, :]
        out[b] = new
    return out


def count_members_numpy(adj: np.ndarray, signs: np.ndarray, rays: np.ndarray) -> np.ndarray:
    """For each ray, the number of cones containing it.

    Cone c contains r exactly when sign(det_c) * (adj_c @ r) >= 0 entrywise,
    where adj_c is the integer adjugate of the generator matrix.
    """
    coeffs = np.einsum("cij,sj->sci", adj, rays) * signs[None, :, None]
    return (coeffs >= 0).all(axis=2).sum(axis=1)


if HAVE_NUMBA:
    @njit(cache=True)
    def mutate_batch_numba(mats, ks):
        out = mats.copy()
        nb, m, n = mats.shape
        for b in range(nb):
            k = ks[b]
            for i in range(m):
                aik = mats[b, i, k]
                for j in range(n):
                    if i == k or j == k:
                        out[b, i, j] = -mats[b, i, j]
                    else:
                        akj = mats[b, k, j]
                        out[b, i, j] = mats[b, i, j] + aik * max(akj, 0) + max(-aik, 0) * akj
        return out

    @njit(cache=True)
    def count_members_numba(adj, signs, rays):
        ns = rays.shape[0]
        nc, n, _ = adj.shape
        counts = np.zeros(ns, dtype=np.int64)
        for s in range(ns):
            for c in range(nc):
                inside = True
                for i in range(n):
                    acc = 0
                    for j in range(n):
                        acc += adj[c, i, j] * rays[s, j]
                    if acc * signs[c] < 0:
                        inside = False
                        break
                if inside:
                    counts[s] += 1
        return counts

    mutate_batch = mutate_batch_numba
    count_members = count_members_numba
else:
    mutate_batch = mutate_batch_numpy
    count_members = count_members_numpy


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
