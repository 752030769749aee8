"""Shear coordinates of laminates.

On a marked surface every crossing of arc gamma contributes by the turns
taken just before and after it: right-then-left is an S passage (+1),
left-then-right a Z passage (-1), anything else 0. Inner arcs of
self-folded triangles read the loop coordinate of the laminate with its
spirals reversed at the enclosed puncture. Orbifold laminates are computed
on the hat surface and recombined per pending weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .laminate import (Laminate, crossings, hat_laminate, resolve, spiral_reverse,
                       validate_and_reduce)
from .surface import SurfaceComplex, hat_complex, inner_label, loop_label

SPIRAL_TURNS_START = 2
SPIRAL_TURNS_CAP = 8


class ShearError(Exception):
    pass


class NonStabilizedSpiral(ShearError):
    pass


class NonIntegralShear(ShearError):
    pass


class IndexMismatch(ShearError, ValueError):
    pass


def _raw_shear(cx: SurfaceComplex, lam: Laminate, turns: int) -> dict:
    path = resolve(cx, lam, turns)
    out: dict = {}
    for arc, before, after in crossings(cx, path, lam.closed):
        if before == "R" and after == "L":
            out[arc] = out.get(arc, 0) + 1
        elif before == "L" and after == "R":
            out[arc] = out.get(arc, 0) - 1
    return out


def shear_ideal(cx: SurfaceComplex, lam: Laminate) -> dict:
    """Direct S/Z counts for every arc, with spirals unwound until stable."""
    has_spiral = not lam.closed and any(hasattr(e, "direction") for e in lam.ends)
    if not has_spiral:
        return _raw_shear(cx, lam, 0)
    prev = _raw_shear(cx, lam, SPIRAL_TURNS_START)
    for k in range(SPIRAL_TURNS_START + 1, SPIRAL_TURNS_CAP + 1):
        cur = _raw_shear(cx, lam, k)
        if cur == prev:
            return cur
        prev = cur
    raise NonStabilizedSpiral(f"shear did not stabilize within {SPIRAL_TURNS_CAP} turns")


@dataclass(frozen=True)
class TaggedTriangulation:
    """A tagged triangulation T given through its ideal counterpart T0.

    ``arcs`` pairs every arc of T (in matrix order) with its arc in T0.
    Spirals at ``notched`` punctures are reversed before anything else.
    """
    complex: SurfaceComplex
    arcs: tuple
    notched: frozenset = frozenset()

    @property
    def labels(self) -> tuple:
        return tuple(a for a, _ in self.arcs)


def shear_tagged(T: TaggedTriangulation, lam: Laminate) -> tuple:
    cx = T.complex
    lam = validate_and_reduce(cx, lam)
    for p in sorted(T.notched):
        lam = spiral_reverse(lam, p)
    inner = cx.inner_arcs()
    cache: dict = {}

    def coords(p):
        if p not in cache:
            cache[p] = shear_ideal(cx, lam if p is None else spiral_reverse(lam, p))
        return cache[p]

    out = []
    for _, arc0 in T.arcs:
        sf = inner.get(arc0)
        if sf is None:
            out.append(Fraction(coords(None).get(arc0, 0)))
        else:
            out.append(Fraction(coords(sf.puncture).get(sf.loop, 0)))
    return tuple(out)


@dataclass(frozen=True)
class OrbifoldTriangulation:
    """A triangulation of a weighted orbifold with its matrix index order.

    ``arcs`` lists the arcs of T in matrix order; ``hat_arcs`` maps each
    arc of T to its counterpart in the ideal triangulation of the hat
    surface (pending arcs map to themselves and use the self-folded pair).
    ``notched`` lists the punctures of the hat surface where T is notched.
    """
    complex: SurfaceComplex
    arcs: tuple
    hat_arcs: dict = field(default_factory=dict)
    notched: frozenset = frozenset()

    def hat(self) -> TaggedTriangulation:
        hc = hat_complex(self.complex)
        pairs = []
        for a in self.arcs:
            if self.complex.is_pending(a):
                pairs.append((inner_label(a), inner_label(a)))
                pairs.append((loop_label(a), loop_label(a)))
            else:
                pairs.append((a, self.hat_arcs.get(a, a)))
        return TaggedTriangulation(hc, tuple(pairs), frozenset(self.notched))

    def weight(self, arc: str) -> Fraction | None:
        if self.complex.is_pending(arc):
            return self.complex.orbifold_points[self.complex.pending[arc]]
        return None

    def pending_half(self) -> set:
        return {a for a in self.arcs if self.weight(a) == Fraction(1, 2)}


def shear_orbifold(T: OrbifoldTriangulation, lam: Laminate) -> tuple:
    cx = T.complex
    lam = validate_and_reduce(cx, lam)
    H = T.hat()
    hat_vec = dict(zip(H.labels, shear_tagged(H, hat_laminate(cx, lam))))
    out = []
    for a in T.arcs:
        w = T.weight(a)
        if w is None:
            v = hat_vec[a]
        else:
            v = hat_vec[inner_label(a)] + hat_vec[loop_label(a)]
            if w == 2:
                v = v / 2
        if v.denominator != 1:
            raise NonIntegralShear(f"coordinate of {a!r} is {v}")
        out.append(v)
    return tuple(out)


def shear(T, lam: Laminate) -> tuple:
    if isinstance(T, OrbifoldTriangulation):
        return shear_orbifold(T, lam)
    return shear_tagged(T, lam)


def as_ints(v: Sequence[Fraction]) -> tuple:
    for x in v:
        if Fraction(x).denominator != 1:
            raise NonIntegralShear(f"non-integral coordinate {x}")
    return tuple(int(x) for x in v)
