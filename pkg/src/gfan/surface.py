"""Triangulated surfaces and orbifolds as glued triangles.

Each triangle lists its three sides counterclockwise together with its
corners, corner ``i`` sitting between side ``i`` and side ``i+1``. Side
``i`` therefore runs from corner ``i-1`` to corner ``i``. An interior arc
fills two side slots, a boundary segment one. At orbifold level a pending
arc (ending at an orbifold point) fills a single slot whose two corners
are the same marked point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Triangle:
    sides: tuple
    corners: tuple

    def __post_init__(self):
        if len(self.sides) != 3 or len(self.corners) != 3:
            raise ComplexError("a triangle has three sides and three corners")


@dataclass(frozen=True)
class SelfFolded:
    triangle: int
    loop: str
    inner: str
    puncture: str


def loop_label(arc: str) -> str:
    return f"{arc}''"


def inner_label(arc: str) -> str:
    return f"{arc}'"


class SurfaceComplex:
    """Immutable gluing data with derived slot and adjacency tables."""

    def __init__(self, triangles: Sequence[Triangle], boundary: Sequence[str] = (),
                 punctures: Sequence[str] = (), orbifold_points: Mapping[str, Fraction] | None = None,
                 pending: Mapping[str, str] | None = None, name: str = ""):
        self.triangles = tuple(triangles)
        self.boundary = frozenset(boundary)
        self.punctures = frozenset(punctures)
        self.orbifold_points = dict(orbifold_points or {})
        self.pending = dict(pending or {})
        self.name = name
        slots: dict = {}
        for t, tri in enumerate(self.triangles):
            for i, s in enumerate(tri.sides):
                slots.setdefault(s, []).append((t, i))
        self.slots = {k: tuple(v) for k, v in slots.items()}
        self._degree: dict = {}
        for tri in self.triangles:
            for c in tri.corners:
                self._degree[c] = self._degree.get(c, 0) + 1
        self._glue = {}
        self._validate()
        self.self_folded = self._find_self_folded()

    def _validate(self):
        for label, where in self.slots.items():
            if label in self.boundary or label in self.pending:
                if len(where) != 1:
                    raise ComplexError(f"{label!r} must fill exactly one slot, found {len(where)}")
                if label in self.pending:
                    t, i = where[0]
                    c = self.triangles[t].corners
                    if c[i - 1] != c[i]:
                        raise ComplexError(f"pending arc {label!r} must sit between equal corners")
                    if self.pending[label] not in self.orbifold_points:
                        raise ComplexError(f"pending arc {label!r} ends at unknown orbifold point")
                continue
            if len(where) != 2:
                raise ComplexError(f"interior arc {label!r} must fill two slots, found {len(where)}")
            (t1, i1), (t2, i2) = where
            c1, c2 = self.triangles[t1].corners, self.triangles[t2].corners
            if c1[i1 - 1] != c2[i2] or c1[i1] != c2[i2 - 1]:
                raise ComplexError(f"arc {label!r}: endpoints of its two slots do not match")
            self._glue[(t1, i1)] = (t2, i2)
            self._glue[(t2, i2)] = (t1, i1)
        for b in self.boundary:
            if b not in self.slots:
                raise ComplexError(f"boundary segment {b!r} is not a side of any triangle")
        for arc in self.pending:
            if arc not in self.slots:
                raise ComplexError(f"pending arc {arc!r} is not a side of any triangle")
        for p in self.punctures:
            if p not in self._degree:
                raise ComplexError(f"puncture {p!r} is not a corner of any triangle")

    def _find_self_folded(self) -> tuple:
        found = []
        for t, tri in enumerate(self.triangles):
            for j in range(3):
                a, b = tri.sides[j], tri.sides[(j + 1) % 3]
                if a == b and set(self.slots.get(a, ())) == {(t, j), (t, (j + 1) % 3)}:
                    loop = tri.sides[(j + 2) % 3]
                    found.append(SelfFolded(t, loop, a, tri.corners[j]))
        return tuple(found)

    # queries

    def labels(self) -> list:
        return sorted(self.slots)

    def arcs(self) -> list:
        return [s for s in self.labels() if s not in self.boundary]

    def is_boundary(self, label: str) -> bool:
        return label in self.boundary

    def is_pending(self, label: str) -> bool:
        return label in self.pending

    def glue(self, t: int, i: int):
        """Slot on the other side of side ``i`` of triangle ``t``.

        None for boundary segments; a pending slot is glued to itself.
        """
        label = self.triangles[t].sides[i]
        if label in self.boundary:
            return None
        if label in self.pending:
            return (t, i)
        return self._glue[(t, i)]

    def degree(self, vertex: str) -> int:
        return self._degree.get(vertex, 0)

    def slot_ordinal(self, t: int, i: int) -> int:
        return self.slots[self.triangles[t].sides[i]].index((t, i))

    def inner_arcs(self) -> dict:
        return {sf.inner: sf for sf in self.self_folded}

    def endpoints(self, label: str) -> tuple:
        t, i = self.slots[label][0]
        c = self.triangles[t].corners
        if label in self.pending:
            return (c[i], self.pending[label])
        return (c[i - 1], c[i])

    def is_puncture(self, v: str) -> bool:
        return v in self.punctures

    def is_boundary_point(self, v: str) -> bool:
        return v in self._degree and v not in self.punctures and v not in self.orbifold_points

    def has_orbifold_points(self) -> bool:
        return bool(self.pending)


def hat_complex(cx: SurfaceComplex) -> SurfaceComplex:
    """Replace each orbifold point by a puncture.

    A pending arc gamma from o to q becomes the loop gamma'' around the new
    puncture q together with the self-folded triangle (gamma'', gamma', gamma')
    whose inner arc gamma' ends at q.
    """
    if not cx.pending:
        return cx
    triangles = []
    extra = []
    for t, tri in enumerate(cx.triangles):
        sides = list(tri.sides)
        for i, s in enumerate(tri.sides):
            if s in cx.pending:
                sides[i] = loop_label(s)
                o = tri.corners[i]
                q = cx.pending[s]
                extra.append(Triangle((loop_label(s), inner_label(s), inner_label(s)), (o, q, o)))
        triangles.append(Triangle(tuple(sides), tri.corners))
    return SurfaceComplex(
        triangles + extra, sorted(cx.boundary), sorted(cx.punctures | set(cx.orbifold_points)),
        name=f"{cx.name}^" if cx.name else "")


def complex_from_dict(doc: dict) -> SurfaceComplex:
    try:
        tris = [Triangle(tuple(str(s) for s in t["sides"]), tuple(str(c) for c in t["corners"]))
                for t in doc["triangles"]]
        orb = {str(k): Fraction(str(v)) for k, v in doc.get("orbifold_points", {}).items()}
        return SurfaceComplex(tris, [str(b) for b in doc.get("boundary", [])],
                              [str(p) for p in doc.get("punctures", [])], orb,
                              {str(k): str(v) for k, v in doc.get("pending", {}).items()},
                              doc.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise ComplexError(f"malformed surface document: {exc}") from exc
