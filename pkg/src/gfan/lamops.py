"""Operations on laminates: elementary laminates of arcs, classification,
splitting of exceptional laminates, enclosure doubling, the coordinate sum
statistic and eventual linearity of twist families.

These work on orbifold-level complexes (pending arcs allowed) as well as on
marked surfaces. End shifts at boundary points rotate clockwise around the
marked point, which with counterclockwise-listed triangles means crossing
side ``i+1`` when standing at corner ``i``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .laminate import (CCW, CW, BoundaryEnd, Crossing, InconsistentWord, Laminate, LaminateError,
                       OrbifoldEnd, SpiralEnd, hat_laminate, pending_arc_of, realizations, reverse_items,
                       spiral_tail, validate_and_reduce)
from .shear import SPIRAL_TURNS_START, OrbifoldTriangulation
from .surface import SurfaceComplex, hat_complex


class UnsupportedEndConfiguration(LaminateError):
    pass


class UndecidableEnclosure(LaminateError):
    pass


class NotExceptional(LaminateError):
    pass


class NoOrbifoldEnd(LaminateError):
    pass


class NotEventuallyLinear(LaminateError):
    pass


# elementary laminates

def _rotate_to_boundary(cx: SurfaceComplex, t: int, corner: int) -> tuple:
    """Crossings met turning clockwise around the corner until the boundary."""
    items = []
    seen = set()
    while True:
        if (t, corner) in seen:
            raise UnsupportedEndConfiguration("vertex link does not reach the boundary")
        seen.add((t, corner))
        side = (corner + 1) % 3
        label = cx.triangles[t].sides[side]
        if cx.is_boundary(label):
            return tuple(items), label
        if cx.is_pending(label):
            items.append(Crossing(label, "L"))
            corner = side
            continue
        items.append(Crossing(label, None, cx.slot_ordinal(t, side)))
        t, corner = cx.glue(t, side)


def make_elementary(cx: SurfaceComplex, arc: str, tags: Sequence[str] = ("plain", "plain")) -> Laminate:
    """Elementary laminate of an arc of the complex.

    ``tags`` give the tag at the two ends in the order of ``cx.endpoints``.
    A pending arc of weight 2 is first replaced by the loop around it.
    """
    if arc not in cx.slots or cx.is_boundary(arc):
        raise UnsupportedEndConfiguration(f"{arc!r} is not an arc of the complex")
    slots = cx.slots[arc]
    if cx.is_pending(arc):
        t, i = slots[0]
        q = cx.pending[arc]
        o = cx.triangles[t].corners[i]
        if not cx.is_boundary_point(o):
            if not cx.is_puncture(o):
                raise UnsupportedEndConfiguration(f"pending arc {arc!r} starts at {o!r}")
        after, seg_after = _end_data(cx, t, i, o, tags[0])
        if cx.orbifold_points[q] == Fraction(1, 2):
            return Laminate(reverse_items(cx, after), (seg_after, OrbifoldEnd(q)), f"se({arc})")
        # weight 2: the loop around the arc, both ends at o
        before = (Crossing(arc, "L"),) + after
        if isinstance(seg_after, BoundaryEnd):
            word = reverse_items(cx, before) + after
        else:
            word = (Crossing(arc, "L"),)
        return Laminate(word, (seg_after, seg_after), f"se({arc})")
    (t1, i1), (t2, i2) = slots
    a, b = cx.endpoints(arc)
    start_items, start_end = _end_data(cx, t2, i2, a, tags[0])
    end_items, end_end = _end_data(cx, t1, i1, b, tags[1])
    head, tail = reverse_items(cx, start_items), end_items
    middles = [(Crossing(arc, None, cx.slot_ordinal(t2, i2)),)]
    if isinstance(start_end, SpiralEnd) or isinstance(end_end, SpiralEnd):
        # a spiral winds across the arc itself, so the middle crossing may be absorbed
        middles = [(), (Crossing(arc, None, cx.slot_ordinal(t2, i2)),), (Crossing(arc, None, cx.slot_ordinal(t1, i1)),)]
    for middle in middles:
        lam = Laminate(head + middle + tail, (start_end, end_end), f"se({arc})")
        if _realizable(cx, lam):
            return lam
    raise UnsupportedEndConfiguration(f"no realizable elementary laminate for {arc!r}")


def _realizable(cx: SurfaceComplex, lam: Laminate) -> bool:
    hc = hat_complex(cx)
    try:
        return len(realizations(hc, hat_laminate(cx, lam), SPIRAL_TURNS_START)) == 1
    except LaminateError:
        return False


def _end_data(cx, t, corner, vertex, tag):
    if cx.is_puncture(vertex):
        return (), SpiralEnd(vertex, CW if tag == "plain" else CCW)
    if vertex in cx.orbifold_points:
        return (), OrbifoldEnd(vertex)
    items, seg = _rotate_to_boundary(cx, t, corner)
    return items, BoundaryEnd(seg)


# classification and splitting

def _palindrome_split(labels: Sequence[str]) -> int:
    # longest A with labels = A + M + reverse(A) and M non-empty
    m = len(labels)
    k = 0
    while 2 * (k + 1) < m and labels[k] == labels[m - 1 - k]:
        k += 1
    return k


def _same_end(a, b) -> bool:
    if isinstance(a, BoundaryEnd) and isinstance(b, BoundaryEnd):
        return a.segment == b.segment
    if isinstance(a, SpiralEnd) and isinstance(b, SpiralEnd):
        return a == b
    return False


def _enclosure(cx: SurfaceComplex, lam: Laminate):
    """(prefix length, enclosed point) for an A + M + reverse(A) word, or None."""
    labels = lam.labels()
    k = _palindrome_split(labels)
    middle = labels[k:len(labels) - k]
    if len(middle) == 1 and cx.is_pending(middle[0]):
        return k, cx.pending[middle[0]]
    common = None
    for arc in middle:
        ends = {v for v in cx.endpoints(arc) if cx.is_puncture(v)}
        common = ends if common is None else common & ends
    for p in sorted(common or ()):
        if len(middle) == cx.degree(p):
            return k, p
    return None


def classify_laminate(cx: SurfaceComplex, lam: Laminate) -> str:
    lam = validate_and_reduce(cx, lam)
    if lam.closed:
        return "closed"
    a, b = lam.ends
    if isinstance(a, OrbifoldEnd) and isinstance(b, OrbifoldEnd):
        return "semi-closed"
    if not _same_end(a, b):
        return "elementary"
    labels = lam.labels()
    if not labels:
        return "elementary"
    enc = _enclosure(cx, lam)
    if enc is None:
        raise UndecidableEnclosure(f"cannot read the region enclosed by {lam.name or labels}")
    point = enc[1]
    if point in cx.orbifold_points:
        return "exceptional" if cx.orbifold_points[point] == Fraction(1, 2) else "elementary"
    return "exceptional"


def split_exceptional(cx: SurfaceComplex, lam: Laminate) -> tuple:
    """The two laminates obtained by cutting around the enclosed point."""
    lam = validate_and_reduce(cx, lam)
    if classify_laminate(cx, lam) != "exceptional":
        raise NotExceptional(f"{lam.name or lam.labels()} is not exceptional")
    k, point = _enclosure(cx, lam)
    word = lam.word
    head = word[:k]
    tail = word[len(word) - k:]
    start, end = lam.ends
    if point in cx.orbifold_points:
        first = Laminate(head, (start, OrbifoldEnd(point)), f"{lam.name}_p")
        second = Laminate(reverse_items(cx, tail), (end, OrbifoldEnd(point)), f"{lam.name}_q")
        return first, second
    direction = _turning_direction(cx, lam, k, point)
    opposite = CW if direction == CCW else CCW
    first = Laminate(head, (start, SpiralEnd(point, direction)), f"{lam.name}_p")
    second = Laminate(reverse_items(cx, tail), (end, SpiralEnd(point, opposite)), f"{lam.name}_q")
    by_cw = sorted((first, second), key=lambda l: l.ends[1].direction != CW)
    return tuple(by_cw)


def _turning_direction(cx, lam, k, p) -> str:
    """ccw when the curve, read from its start, passes p on its left."""
    paths = realizations(cx, lam, SPIRAL_TURNS_START)
    if len(paths) != 1:
        raise UndecidableEnclosure("the exceptional laminate has no unique realization")
    path = paths[0]
    t, _, x = path[_word_offset(cx, lam, path) + k]
    corners = cx.triangles[t].corners
    if corners[x] == p:
        return CCW
    if corners[x - 1] == p:
        return CW
    raise UndecidableEnclosure("middle crossing does not touch the enclosed puncture")


def _word_offset(cx, lam, path) -> int:
    """Index of the path segment exiting through the first word crossing."""
    start = lam.ends[0]
    if isinstance(start, BoundaryEnd):
        return 0
    first = lam.word[0]
    for t0, x0 in cx.slots[first.arc]:
        tail = spiral_tail(cx, t0, x0, start.puncture, start.direction, SPIRAL_TURNS_START)
        if tail is None:
            continue
        off = len(tail) - 1
        if off < len(path) and path[off][0] == t0 and path[off][2] == x0:
            return off
    raise UndecidableEnclosure("cannot locate the word inside the realized path")


# enclosure doubling

def enclose_double(cx: SurfaceComplex, lam: Laminate) -> Laminate:
    """Boundary of a thin neighbourhood of a laminate with an orbifold end."""
    if lam.closed or not any(isinstance(e, OrbifoldEnd) for e in lam.ends):
        raise NoOrbifoldEnd(f"{lam.name or lam.labels()} has no orbifold end")
    start, end = lam.ends
    if isinstance(start, OrbifoldEnd) and not isinstance(end, OrbifoldEnd):
        lam = Laminate(reverse_items(cx, lam.word), (end, start), lam.name)
        start, end = lam.ends
    A = lam.word
    around_end = Crossing(pending_arc_of(cx, end.point), "L")
    if isinstance(start, OrbifoldEnd):
        around_start = Crossing(pending_arc_of(cx, start.point), "L")
        word = A + (around_end,) + reverse_items(cx, A) + (around_start,)
        return Laminate(word, None, f"{lam.name}'")
    word = A + (around_end,) + reverse_items(cx, A)
    return Laminate(word, (start, start), f"{lam.name}'")


def double_lamination(cx: SurfaceComplex, lams: Sequence[Laminate]) -> list:
    out = []
    for lam in lams:
        if not lam.closed and any(isinstance(e, OrbifoldEnd) for e in lam.ends):
            out.append(enclose_double(cx, lam))
        else:
            out.extend([lam, lam])
    return out


# statistics

def ps_arcs(T) -> set:
    """Pending arcs of weight 1/2 and arcs inside self-folded triangles."""
    if isinstance(T, OrbifoldTriangulation):
        return T.pending_half()
    inner = T.complex.inner_arcs()
    loops = {sf.loop for sf in inner.values()}
    return {a for a, a0 in T.arcs if a0 in inner or a0 in loops}


def sum_statistic(T, v: Sequence) -> Fraction:
    labels = T.arcs if not hasattr(T, "labels") else T.labels
    if len(v) != len(labels):
        raise InconsistentWord(f"vector of length {len(v)} for {len(labels)} arcs")
    half = ps_arcs(T)
    total = Fraction(0)
    for a, x in zip(labels, v):
        total += Fraction(x) / 2 if a in half else Fraction(x)
    return total


def predicted_sum(lam: Laminate) -> Fraction:
    """Value of the sum statistic predicted from the end configuration."""
    if lam.closed:
        raise InconsistentWord("closed laminates have no end prediction")
    spirals = [e.direction for e in lam.ends if isinstance(e, SpiralEnd)]
    orbifold = sum(isinstance(e, OrbifoldEnd) for e in lam.ends)
    if len(spirals) == 2:
        if spirals == [CW, CW]:
            return Fraction(-1)
        if spirals == [CCW, CCW]:
            return Fraction(1)
        return Fraction(0)
    if len(spirals) == 1 and orbifold == 1:
        return Fraction(-1, 2) if spirals[0] == CW else Fraction(1, 2)
    if orbifold == 2:
        return Fraction(0)
    raise InconsistentWord("prediction needs spiral or orbifold ends only")


def twist_family_check(family: Callable[[int], Sequence], twist_shear: Sequence, intersections: int,
                       cap: int = 8) -> dict:
    """Least m' with v(m+1) - v(m) = intersections * twist_shear for m' <= m < cap."""
    step = tuple(Fraction(intersections) * Fraction(x) for x in twist_shear)
    values = [tuple(Fraction(x) for x in family(m)) for m in range(cap + 1)]
    diffs = [tuple(b - a for a, b in zip(values[m], values[m + 1])) for m in range(cap)]
    for start in range(cap):
        if all(d == step for d in diffs[start:]):
            return {"m_prime": start, "slope": step, "verified": True}
    raise NotEventuallyLinear(f"no constant increment {step} within cap {cap}")
