"""Time the batched kernels on the numba and numpy paths.

    python3 benchmarks/bench_kernels.py --rays 100000 --depth 20
"""
import argparse
import time

import numpy as np

from gfan import kernels
from gfan.fan import _membership_tables, explore, lcg_rays


def timed(fn, *args, repeats=3):
    fn(*args)  # warm-up, includes JIT compilation on the numba path
    best = float("inf")
    for _ in range(repeats):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return out, best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rays", type=int, default=100_000)
    parser.add_argument("--depth", type=int, default=20)
    parser.add_argument("--batch", type=int, default=100_000)
    args = parser.parse_args()

    atlas = explore(((0, -1), (4, 0)), args.depth)
    signs, adjs = _membership_tables(atlas)
    adj = np.array(adjs, dtype=np.int64)
    sign = np.array(signs, dtype=np.int64)
    rays = np.array(lcg_rays(args.rays, 2, 7), dtype=np.int64)

    rng = np.random.default_rng(0)
    top = rng.integers(-4, 5, size=(args.batch, 3, 3))
    top = top - top.transpose(0, 2, 1)
    mats = np.concatenate([top, np.broadcast_to(np.eye(3, dtype=np.int64), top.shape)], axis=1).astype(np.int64)
    ks = rng.integers(0, 3, size=args.batch)

    print(f"cones={len(atlas)} rays={args.rays} matrices={args.batch}")
    paths = [("numpy", kernels.count_members_numpy, kernels.mutate_batch_numpy)]
    if kernels.HAVE_NUMBA:
        paths.append(("numba", kernels.count_members_numba, kernels.mutate_batch_numba))
    results = {}
    for name, count, mutate in paths:
        counts, t_count = timed(count, adj, sign, rays)
        mutated, t_mut = timed(mutate, mats, ks)
        results[name] = (counts, mutated)
        print(f"{name:>6}: membership {t_count * 1e3:8.2f} ms   mutation {t_mut * 1e3:8.2f} ms")
    if len(results) == 2:
        same = all(np.array_equal(a, b) for a, b in zip(results["numpy"], results["numba"]))
        print("outputs identical:", same)


if __name__ == "__main__":
    main()
