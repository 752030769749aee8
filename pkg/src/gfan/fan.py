"""Exchange-graph exploration, g-vector cones and fan-level checks.

Exploration is breadth first over unlabelled seeds with principal
coefficients. A node is keyed by its fingerprint (sorted g-vectors plus the
extended matrix permuted to match), so relabelled copies of a seed merge.

Children are computed from g-vectors alone by default: a new cluster
variable is a ratio of homogeneous polynomials, so its degree is the
degree of either exchange monomial minus the degree of the variable it
replaces. ``mode="laurent"`` computes the actual Laurent polynomials
instead and reads g-vectors off them.
"""
from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .mutation import (Seed, as_matrix, find_symmetrizer, fingerprint, g_vectors, initial_seed,
                       mutate_matrix, mutate_seed, principal_extension)

CACHE_FORMAT = "gfan-atlas"
CACHE_VERSION = 1

RAY_RADIUS = 100
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
LCG_MASK = (1 << 64) - 1


class FanError(Exception):
    pass


class SingularCone(FanError):
    pass


class CacheMismatch(FanError):
    pass


def thread_count() -> int:
    raw = os.environ.get("GFAN_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise FanError(f"GFAN_THREADS must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise FanError(f"GFAN_THREADS must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ClusterNode:
    key: tuple
    g_vectors: tuple
    matrix: tuple
    depth: int
    word: tuple
    seed: Seed | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {"word": list(self.word), "depth": self.depth,
                "g_vectors": [list(g) for g in self.g_vectors], "matrix": [list(r) for r in self.matrix]}


@dataclass
class FanAtlas:
    matrix: tuple
    depth: int
    nodes: list
    complete: bool = False
    mode: str = "degree"

    def __post_init__(self):
        self.index = {node.key: i for i, node in enumerate(self.nodes)}

    @property
    def n(self) -> int:
        return len(self.matrix)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, key) -> bool:
        return key in self.index

    def all_g_vectors(self) -> list:
        seen = {}
        for node in self.nodes:
            for g in node.g_vectors:
                seen.setdefault(g, None)
        return list(seen)

    def level(self, d: int) -> list:
        return [node for node in self.nodes if node.depth == d]

    def cones(self) -> list:
        return [Cone(node.g_vectors) for node in self.nodes]

    def truncated(self, depth: int) -> "FanAtlas":
        if depth >= self.depth:
            return self
        nodes = [node for node in self.nodes if node.depth <= depth]
        complete = not any(node.depth == depth + 1 for node in self.nodes)
        return FanAtlas(self.matrix, depth, nodes, complete, self.mode)


# children

def _child_degree(node: ClusterNode, B: tuple, k: int) -> tuple:
    n = len(B)
    A = node.matrix
    gs = node.g_vectors
    new = [-x for x in gs[k - 1]]
    for i in range(n):
        a = A[i][k - 1]
        if a > 0:
            for r in range(n):
                new[r] += a * gs[i][r]
    for j in range(n):
        a = A[n + j][k - 1]
        if a > 0:
            for r in range(n):
                new[r] -= a * B[r][j]
    g_new = gs[: k - 1] + (tuple(new),) + gs[k:]
    return g_new, mutate_matrix(A, k), None


def _child_laurent(node: ClusterNode, B: tuple, k: int) -> tuple:
    seed = mutate_seed(node.seed, k)
    return g_vectors(seed), seed.matrix, seed


def child(node: ClusterNode, B: tuple, k: int, mode: str = "degree") -> ClusterNode:
    compute = _child_laurent if mode == "laurent" else _child_degree
    gs, A, seed = compute(node, B, k)
    return ClusterNode(fingerprint(gs, A), gs, A, node.depth + 1, node.word + (k,), seed)


def root_node(B, mode: str = "degree") -> ClusterNode:
    B = as_matrix(B)
    n = len(B)
    A = principal_extension(B)
    gs = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seed = initial_seed(B) if mode == "laurent" else None
    return ClusterNode(fingerprint(gs, A), gs, A, 0, (), seed)


# exploration

def explore(B, depth: int, threads: int | None = None, mode: str = "degree",
            resume: FanAtlas | None = None) -> FanAtlas:
    """Breadth-first closure of the exchange graph to ``depth`` mutations.

    Each new level is deduplicated against everything seen so far; a node
    keeps the word of its first discovery in (parent order, index) order and
    the level is then sorted by fingerprint, so the result does not depend
    on scheduling.
    """
    if mode not in ("degree", "laurent"):
        raise FanError(f"unknown exploration mode {mode!r}")
    if depth < 0:
        raise FanError("depth must be non-negative")
    B = as_matrix(B)
    find_symmetrizer(B)
    n = len(B)
    usable = resume is not None and resume.matrix == B and resume.mode == mode and mode == "degree"
    if usable and resume.depth >= depth:
        return resume.truncated(depth)
    if usable and resume.complete:
        return FanAtlas(B, depth, list(resume.nodes), True, mode)
    if usable:
        nodes, done = list(resume.nodes), resume.depth
    else:
        nodes, done = [root_node(B, mode)], 0
    seen = {node.key for node in nodes}
    frontier = [node for node in nodes if node.depth == done]
    with ThreadPoolExecutor(max_workers=threads or thread_count()) as pool:
        for _ in range(done, depth):
            jobs = [(node, k) for node in frontier for k in range(1, n + 1)]
            children = list(pool.map(lambda job: child(job[0], B, job[1], mode), jobs))
            fresh: dict = {}
            for c in children:
                if c.key not in seen and c.key not in fresh:
                    fresh[c.key] = c
            frontier = [fresh[key] for key in sorted(fresh)]
            nodes.extend(frontier)
            seen.update(fresh)
            if not frontier:
                break
    complete = not frontier or _closed(frontier, seen, B, mode)
    return FanAtlas(B, depth, nodes, complete, mode)


def _closed(frontier: list, seen: set, B: tuple, mode: str) -> bool:
    """True when no node of the last level has an unseen neighbour."""
    n = len(B)
    return all(child(node, B, k, mode).key in seen for node in frontier for k in range(1, n + 1))


# cones

def _det_and_inverse(M: Sequence[Sequence[int]]) -> tuple:
    """Exact determinant and inverse by Gauss-Jordan over the rationals."""
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return Fraction(0), None
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
            det = -det
        p = aug[col][col]
        det *= p
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return det, [row[n:] for row in aug]


@dataclass(frozen=True)
class Cone:
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(tuple(int(x) for x in g) for g in self.generators))

    def matrix(self) -> list:
        """Generators as columns."""
        n = len(self.generators)
        return [[self.generators[j][i] for j in range(n)] for i in range(n)]

    def adjugate(self) -> tuple:
        """(det, integer adjugate) of the column matrix; SingularCone if det = 0."""
        det, inv = _det_and_inverse(self.matrix())
        if det == 0:
            raise SingularCone(f"generators {list(self.generators)} are linearly dependent")
        adj = tuple(tuple(int(det * x) for x in row) for row in inv)
        return int(det), adj

    def coefficients(self, ray: Sequence[int]) -> tuple:
        det, inv = _det_and_inverse(self.matrix())
        if det == 0:
            raise SingularCone(f"generators {list(self.generators)} are linearly dependent")
        return tuple(sum(inv[i][j] * Fraction(ray[j]) for j in range(len(ray))) for i in range(len(ray)))


def cone_contains(cone: Cone, ray: Sequence[int]) -> bool:
    if len(ray) != len(cone.generators):
        raise FanError(f"ray of length {len(ray)} for a cone in dimension {len(cone.generators)}")
    return all(a >= 0 for a in cone.coefficients(ray))


def covered(atlas: FanAtlas, ray: Sequence[int]) -> bool:
    return any(cone_contains(c, ray) for c in atlas.cones())


# sampling

def lcg_rays(count: int, n: int, seed: int) -> list:
    """``count`` non-zero integer vectors in [-R, R]^n from a 64-bit LCG.

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64,
    coordinate = ((state >> 33) mod 201) - 100.
    """
    state = seed & LCG_MASK
    width = 2 * RAY_RADIUS + 1
    rays = []
    while len(rays) < count:
        vec = []
        for _ in range(n):
            state = (LCG_MULTIPLIER * state + LCG_INCREMENT) & LCG_MASK
            vec.append((state >> 33) % width - RAY_RADIUS)
        if any(vec):
            rays.append(tuple(vec))
    return rays


def _membership_tables(atlas: FanAtlas) -> tuple:
    dets, adjs = [], []
    for cone in atlas.cones():
        det, adj = cone.adjugate()
        dets.append(1 if det > 0 else -1)
        adjs.append(adj)
    return dets, adjs


def _count_exact(adjs, dets, rays) -> list:
    counts = []
    for r in rays:
        c = 0
        for adj, s in zip(adjs, dets):
            if all(s * sum(a * x for a, x in zip(row, r)) >= 0 for row in adj):
                c += 1
        counts.append(c)
    return counts


def membership_counts(atlas: FanAtlas, rays: Sequence[Sequence[int]]) -> list:
    """Number of explored cones containing each ray."""
    dets, adjs = _membership_tables(atlas)
    if not rays:
        return []
    n = atlas.n
    bound = max((abs(a) for adj in adjs for row in adj for a in row), default=0)
    if bound * RAY_RADIUS * n >= kernels.INT64_SAFE:
        return _count_exact(adjs, dets, rays)
    adj_arr = np.array(adjs, dtype=np.int64).reshape(len(adjs), n, n)
    sign_arr = np.array(dets, dtype=np.int64)
    ray_arr = np.array(rays, dtype=np.int64).reshape(len(rays), n)
    return [int(x) for x in kernels.count_members(adj_arr, sign_arr, ray_arr)]


def coverage_estimate(atlas: FanAtlas, samples: int, seed: int, probes: Sequence[Sequence[int]] = ()) -> dict:
    rays = lcg_rays(samples, atlas.n, seed)
    counts = membership_counts(atlas, rays)
    uncovered = [list(r) for r, c in zip(rays, counts) if c == 0]
    hit = samples - len(uncovered)
    report = {
        "coverage": hit / samples if samples else 0.0,
        "covered": hit,
        "samples": samples,
        "seed": seed,
        "depth": atlas.depth,
        "cones": len(atlas),
        "uncovered": uncovered,
    }
    if probes:
        report["probes"] = [{"ray": list(p), "covered": covered(atlas, p)} for p in probes]
    return report


def fan_overlap_check(atlas: FanAtlas, samples: int, seed: int) -> list:
    """Rays lying in two cones without lying on a common face of both."""
    rays = lcg_rays(samples, atlas.n, seed)
    cones = atlas.cones()
    tables = [c.adjugate() for c in cones]
    bad = []
    for r in rays:
        inside = []
        for c, (det, adj) in zip(cones, tables):
            # coefficients scaled by |det|, so only their signs and zeros matter
            coeffs = [(1 if det > 0 else -1) * sum(a * x for a, x in zip(row, r)) for row in adj]
            if all(a >= 0 for a in coeffs):
                inside.append((c, coeffs))
        for i in range(len(inside)):
            for j in range(i + 1, len(inside)):
                if not (0 in inside[i][1] and 0 in inside[j][1]):
                    bad.append({"ray": list(r), "cones": [list(map(list, inside[i][0].generators)),
                                                          list(map(list, inside[j][0].generators))]})
    return bad


# half-space and duality

def halfspace_verify(atlas: FanAtlas, functional: Sequence) -> dict:
    f = tuple(Fraction(x) for x in functional)
    if len(f) != atlas.n:
        raise FanError(f"functional of length {len(f)} for rank {atlas.n}")
    minimum = None
    argmin = None
    violations = []
    gs = atlas.all_g_vectors()
    for g in gs:
        value = sum(a * b for a, b in zip(f, g))
        if minimum is None or value < minimum:
            minimum, argmin = value, g
        if value < 0:
            violations.append({"g": list(g), "value": str(value)})
    return {
        "functional": [str(x) for x in f],
        "depth": atlas.depth,
        "nodes": len(atlas),
        "g_vectors": len(gs),
        "minimum": str(minimum),
        "argmin": list(argmin) if argmin is not None else None,
        "violations": violations,
    }


def duality_verify(B, pairs: Sequence[tuple], dual_triangulation, shear_fn) -> list:
    """Compare g(x) with -b(se(delta*)) for (word, index, laminate) pairs."""
    from .mutation import g_vector, mutate_word
    start = initial_seed(B)
    out = []
    for word, index, lam in pairs:
        g = g_vector(mutate_word(start, word), index)
        b = tuple(shear_fn(dual_triangulation, lam))
        expected = tuple(-x for x in b)
        out.append({"word": list(word), "index": index, "laminate": lam.name, "g": list(g),
                    "minus_shear": [int(x) for x in expected], "ok": tuple(g) == expected})
    return out


# cache

def atlas_to_dict(atlas: FanAtlas) -> dict:
    return {
        "format": CACHE_FORMAT,
        "version": CACHE_VERSION,
        "matrix": [list(r) for r in atlas.matrix],
        "depth": atlas.depth,
        "mode": atlas.mode,
        "complete": atlas.complete,
        "nodes": [node.to_dict() for node in atlas.nodes],
    }


def atlas_from_dict(doc: dict) -> FanAtlas:
    if doc.get("format") != CACHE_FORMAT or doc.get("version") != CACHE_VERSION:
        raise CacheMismatch(f"cache format {doc.get('format')!r} version {doc.get('version')!r} "
                            f"is not {CACHE_FORMAT!r} version {CACHE_VERSION}")
    try:
        B = as_matrix(doc["matrix"])
        nodes = []
        for d in doc["nodes"]:
            gs = tuple(tuple(int(x) for x in g) for g in d["g_vectors"])
            A = as_matrix(d["matrix"])
            nodes.append(ClusterNode(fingerprint(gs, A), gs, A, int(d["depth"]), tuple(d["word"])))
        return FanAtlas(B, int(doc["depth"]), nodes, bool(doc.get("complete", False)), doc.get("mode", "degree"))
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheMismatch(f"unreadable atlas cache: {exc}") from exc


def write_json_atomic(path: str, doc) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_atlas(path: str) -> FanAtlas:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CacheMismatch(f"cache {path} is not JSON: {exc}") from exc
    return atlas_from_dict(doc)


def explore_cached(B, depth: int, cache: str | None, threads: int | None = None, mode: str = "degree") -> FanAtlas:
    """Explore, reusing and refreshing the cache file when given.

    A cache for a different matrix or exploration mode is a mismatch.
    """
    B = as_matrix(B)
    resume = None
    if cache and os.path.exists(cache):
        resume = load_atlas(cache)
        if resume.matrix != B or resume.mode != mode:
            raise CacheMismatch(f"cache {cache} was built for a different matrix or mode")
        if mode == "laurent":
            resume = None
    atlas = explore(B, depth, threads, mode, resume)
    if cache and (resume is None or atlas.depth > resume.depth):
        write_json_atomic(cache, atlas_to_dict(atlas))
    return atlas
