"""Weighted-orbifold triangulations and the exchange matrix B_T.

A triangulation is described by its arcs and a list of triangles, each
naming a catalog row and listing its sides in the row's numbering. The
exchange matrix is the sum of the local catalog matrices with boundary
segments projected out.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

HALF = Fraction(1, 2)
TWO = Fraction(2)


class OrbifoldError(Exception):
    pass


class UnknownCatalogRow(OrbifoldError):
    pass


class SymmetrizerMismatch(OrbifoldError):
    pass


class NotOncePuncturedClosed(OrbifoldError):
    pass


class SpecError(OrbifoldError, ValueError):
    pass


def parse_weight(w) -> Fraction:
    value = Fraction(str(w))
    if value not in (HALF, TWO):
        raise SpecError(f"orbifold weight must be 1/2 or 2, got {w!r}")
    return value


def weight_str(w: Fraction) -> str:
    return "1/2" if w == HALF else "2"


def _rows(*weights, matrix):
    return (tuple(Fraction(str(w)) for w in weights), tuple(tuple(r) for r in matrix))


# catalog type -> {weights tuple: local matrix}, sides numbered as in the tables
CATALOG: dict = {
    "plain": dict([_rows(matrix=[[0, 1, -1], [-1, 0, 1], [1, -1, 0]])]),
    "digon-conjugate-pair": dict([_rows(matrix=[
        [0, 1, -1, -1], [-1, 0, 1, 1], [1, -1, 0, 0], [1, -1, 0, 0]])]),
    "two-conjugate-pairs": dict([_rows(matrix=[
        [0, -1, -1, 1, 1], [1, 0, 0, -1, -1], [1, 0, 0, -1, -1], [-1, 1, 1, 0, 0], [-1, 1, 1, 0, 0]])]),
    "digon-pending": dict([
        _rows("1/2", matrix=[[0, 1, -2], [-1, 0, 2], [1, -1, 0]]),
        _rows("2", matrix=[[0, 1, -1], [-1, 0, 1], [2, -2, 0]]),
    ]),
    "monogon-pair-pending": dict([
        _rows("1/2", matrix=[[0, -1, -1, 2], [1, 0, 0, -2], [1, 0, 0, -2], [-1, 1, 1, 0]]),
        _rows("2", matrix=[[0, -1, -1, 1], [1, 0, 0, -1], [1, 0, 0, -1], [-2, 2, 2, 0]]),
    ]),
    "monogon-pending-pair": dict([
        _rows("1/2", matrix=[[0, -2, 1, 1], [1, 0, -1, -1], [-1, 2, 0, 0], [-1, 2, 0, 0]]),
        _rows("2", matrix=[[0, -1, 1, 1], [2, 0, -2, -2], [-1, 1, 0, 0], [-1, 1, 0, 0]]),
    ]),
    "monogon-two-pending": dict([
        _rows("1/2", "1/2", matrix=[[0, -2, 2], [1, 0, -2], [-1, 2, 0]]),
        _rows("1/2", "2", matrix=[[0, -2, 1], [1, 0, -1], [-2, 4, 0]]),
        _rows("2", "1/2", matrix=[[0, -1, 2], [2, 0, -4], [-1, 1, 0]]),
        _rows("2", "2", matrix=[[0, -1, 1], [2, 0, -1], [-2, 1, 0]]),
    ]),
    "exceptional-three-pairs": dict([_rows(matrix=[
        [0, 0, 1, 1, -1, -1], [0, 0, 1, 1, -1, -1], [-1, -1, 0, 0, 1, 1],
        [-1, -1, 0, 0, 1, 1], [1, 1, -1, -1, 0, 0], [1, 1, -1, -1, 0, 0]])]),
    "exceptional-two-pairs-pending": dict([
        _rows("1/2", matrix=[[0, 0, 1, 1, -2], [0, 0, 1, 1, -2], [-1, -1, 0, 0, 2], [-1, -1, 0, 0, 2], [1, 1, -1, -1, 0]]),
        _rows("2", matrix=[[0, 0, 1, 1, -1], [0, 0, 1, 1, -1], [-1, -1, 0, 0, 1], [-1, -1, 0, 0, 1], [2, 2, -2, -2, 0]]),
    ]),
    "exceptional-pair-two-pending": dict([
        _rows("1/2", "1/2", matrix=[[0, 0, 2, -2], [0, 0, 2, -2], [-1, -1, 0, 2], [1, 1, -2, 0]]),
        _rows("1/2", "2", matrix=[[0, 0, 2, -1], [0, 0, 2, -1], [-1, -1, 0, 1], [2, 2, -4, 0]]),
        _rows("2", "1/2", matrix=[[0, 0, 1, -2], [0, 0, 1, -2], [-2, -2, 0, 4], [1, 1, -1, 0]]),
        _rows("2", "2", matrix=[[0, 0, 1, -1], [0, 0, 1, -1], [-2, -2, 0, 1], [2, 2, -1, 0]]),
    ]),
    "exceptional-three-pending": dict([
        _rows("1/2", "1/2", "1/2", matrix=[[0, 2, -2], [-2, 0, 2], [2, -2, 0]]),
        _rows("2", "2", "2", matrix=[[0, 2, -2], [-2, 0, 2], [2, -2, 0]]),
        _rows("1/2", "1/2", "2", matrix=[[0, 2, -1], [-2, 0, 1], [4, -4, 0]]),
        _rows("1/2", "2", "2", matrix=[[0, 1, -1], [-4, 0, 2], [4, -2, 0]]),
    ]),
}


@dataclass(frozen=True)
class ArcDescriptor:
    id: str
    kind: str = "ordinary"  # ordinary | pending | boundary
    weight: Fraction | None = None
    pair_partner: str | None = None

    def __post_init__(self):
        if self.kind not in ("ordinary", "pending", "boundary"):
            raise SpecError(f"unknown arc kind {self.kind!r}")
        if (self.kind == "pending") != (self.weight is not None):
            raise SpecError(f"arc {self.id}: exactly the pending arcs carry a weight")


@dataclass(frozen=True)
class TriangleDescriptor:
    catalog_type: str
    sides: tuple
    weights: tuple = ()


@dataclass(frozen=True)
class TriangulationSpec:
    arcs: tuple
    triangles: tuple
    boundary: tuple = ()
    punctures: int = 0
    name: str = ""

    def arc(self, label: str) -> ArcDescriptor:
        for a in self.arcs:
            if a.id == label:
                return a
        raise SpecError(f"unknown arc {label!r}")

    def interior_arcs(self) -> list:
        return [a for a in self.arcs if a.kind != "boundary" and a.id not in self.boundary]

    def weights(self) -> tuple:
        return tuple(a.weight if a.kind == "pending" else Fraction(1) for a in self.interior_arcs())


def triangle_matrix(t: TriangleDescriptor) -> dict:
    """Local matrix of a triangle as a sparse map (side_i, side_j) -> entry."""
    rows = CATALOG.get(t.catalog_type)
    if rows is None:
        raise UnknownCatalogRow(f"unknown triangle type {t.catalog_type!r}")
    key = tuple(Fraction(str(w)) for w in t.weights)
    local = rows.get(key)
    if local is None:
        shown = ",".join(weight_str(w) for w in key) or "none"
        raise UnknownCatalogRow(f"no {t.catalog_type} row for weights ({shown})")
    if len(t.sides) != len(local):
        raise UnknownCatalogRow(f"{t.catalog_type} needs {len(local)} sides, got {len(t.sides)}")
    out: dict = {}
    for i, si in enumerate(t.sides):
        for j, sj in enumerate(t.sides):
            if local[i][j]:
                out[(si, sj)] = out.get((si, sj), 0) + local[i][j]
    return out


def assemble_matrix(spec: TriangulationSpec) -> tuple:
    """Return (B_T, d) with rows and columns in the order of interior arcs."""
    labels = [a.id for a in spec.interior_arcs()]
    index = {label: i for i, label in enumerate(labels)}
    n = len(labels)
    B = [[0] * n for _ in range(n)]
    for t in spec.triangles:
        for (si, sj), v in triangle_matrix(t).items():
            if si in index and sj in index:
                B[index[si]][index[sj]] += v
    d = spec.weights()
    for i in range(n):
        for j in range(n):
            if B[i][j] * d[j] != -B[j][i] * d[i]:
                raise SymmetrizerMismatch(
                    f"b[{labels[i]}][{labels[j]}]*d = {B[i][j] * d[j]} but -b[{labels[j]}][{labels[i]}]*d = {-B[j][i] * d[i]}")
    return tuple(tuple(r) for r in B), d


def dual_spec(spec: TriangulationSpec) -> TriangulationSpec:
    """Same combinatorics with pending weights 1/2 and 2 exchanged."""
    def flip(w):
        return TWO if Fraction(str(w)) == HALF else HALF

    arcs = tuple(replace(a, weight=flip(a.weight)) if a.kind == "pending" else a for a in spec.arcs)
    triangles = tuple(replace(t, weights=tuple(flip(w) for w in t.weights)) for t in spec.triangles)
    return replace(spec, arcs=arcs, triangles=triangles)


def halfspace_functional(spec: TriangulationSpec, dual: bool = False) -> tuple:
    """Coefficients 1/2 on pending arcs of weight 1/2 and 1 elsewhere.

    With ``dual`` the weights are read on the orbifold with inverted
    weights, so the 1/2 coefficients sit on the pending arcs of weight 2.
    """
    if spec.boundary or spec.punctures != 1:
        raise NotOncePuncturedClosed(
            f"needs empty boundary and one puncture, got boundary={list(spec.boundary)} punctures={spec.punctures}")
    target = TWO if dual else HALF
    return tuple(HALF if a.kind == "pending" and a.weight == target else Fraction(1) for a in spec.interior_arcs())


# documents

def spec_from_dict(doc: dict) -> TriangulationSpec:
    try:
        boundary = tuple(str(b) for b in doc.get("boundary", ()))
        arcs = []
        for a in doc["arcs"]:
            kind = a.get("kind", "ordinary")
            weight = parse_weight(a["weight"]) if kind == "pending" else None
            arcs.append(ArcDescriptor(str(a["id"]), kind, weight, a.get("pair_partner")))
        known = {a.id for a in arcs}
        for b in boundary:
            if b not in known:
                arcs.append(ArcDescriptor(b, "boundary"))
        triangles = tuple(
            TriangleDescriptor(t["type"], tuple(str(s) for s in t["sides"]),
                               tuple(parse_weight(w) for w in t.get("weights", ())))
            for t in doc["triangles"])
        return TriangulationSpec(tuple(arcs), triangles, boundary, int(doc.get("punctures", 0)), doc.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed triangulation document: {exc}") from exc


def spec_to_dict(spec: TriangulationSpec) -> dict:
    arcs = []
    for a in spec.arcs:
        if a.kind == "boundary":
            continue
        entry = {"id": a.id, "kind": a.kind}
        if a.weight is not None:
            entry["weight"] = weight_str(a.weight)
        if a.pair_partner:
            entry["pair_partner"] = a.pair_partner
        arcs.append(entry)
    triangles = []
    for t in spec.triangles:
        entry = {"type": t.catalog_type, "sides": list(t.sides)}
        if t.weights:
            entry["weights"] = [weight_str(w) for w in t.weights]
        triangles.append(entry)
    return {"name": spec.name, "arcs": arcs, "triangles": triangles,
            "boundary": list(spec.boundary), "punctures": spec.punctures}


def load_spec(path) -> TriangulationSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))
