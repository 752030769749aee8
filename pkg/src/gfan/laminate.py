"""Laminates as crossing words, and their realization as normal paths.

A laminate is a word of arc crossings plus two ends, or a cyclic word. A
crossing item may carry hints:

* ``arc#k`` the crossing leaves its triangle through slot number ``k`` of
  the arc (slots numbered in triangle order);
* ``arc:L`` / ``arc:R`` for an ordinary arc, the turn taken just before the
  crossing; for a pending arc, the side on which the orbifold point passes.

A realization is a list of segments ``(triangle, entry_slot, exit_slot)``.
Entering through side ``i`` and leaving through side ``i+1`` is a right turn
around corner ``i``; leaving through side ``i-1`` is a left turn around
corner ``i-1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Sequence

from .surface import SurfaceComplex, inner_label, loop_label


class LaminateError(Exception):
    pass


class ExcludedCurve(LaminateError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class InconsistentWord(LaminateError):
    pass


class AmbiguousWord(LaminateError):
    pass


class LaminateParseError(LaminateError, ValueError):
    pass


CW, CCW = "cw", "ccw"


@dataclass(frozen=True)
class BoundaryEnd:
    segment: str
    offset: int = 0


@dataclass(frozen=True)
class SpiralEnd:
    puncture: str
    direction: str

    def __post_init__(self):
        if self.direction not in (CW, CCW):
            raise LaminateParseError(f"spiral direction must be cw or ccw, got {self.direction!r}")


@dataclass(frozen=True)
class OrbifoldEnd:
    point: str


@dataclass(frozen=True)
class Crossing:
    arc: str
    hint: str | None = None
    slot: int | None = None

    def __str__(self):
        s = self.arc
        if self.slot is not None:
            s += f"#{self.slot}"
        if self.hint:
            s += f":{self.hint}"
        return s


@dataclass(frozen=True)
class Laminate:
    word: tuple
    ends: tuple | None = None  # None for a closed curve
    name: str = ""

    @property
    def closed(self) -> bool:
        return self.ends is None

    def labels(self) -> tuple:
        return tuple(c.arc for c in self.word)


_ITEM = re.compile(r"^([^#:]+)(?:#(\d+))?(?::([LR]))?$")


def parse_item(text) -> Crossing:
    if isinstance(text, Crossing):
        return text
    m = _ITEM.match(str(text))
    if not m:
        raise LaminateParseError(f"bad crossing item {text!r}")
    return Crossing(m.group(1), m.group(3), int(m.group(2)) if m.group(2) is not None else None)


def end_from_dict(d: dict):
    kind = d.get("type")
    if kind == "boundary":
        return BoundaryEnd(str(d["segment"]), int(d.get("offset", 0)))
    if kind == "spiral":
        return SpiralEnd(str(d["puncture"]), d["dir"])
    if kind == "orbifold":
        return OrbifoldEnd(str(d["point"]))
    raise LaminateParseError(f"unknown end type {kind!r}")


def end_to_dict(e) -> dict:
    if isinstance(e, BoundaryEnd):
        return {"type": "boundary", "segment": e.segment, "offset": e.offset}
    if isinstance(e, SpiralEnd):
        return {"type": "spiral", "puncture": e.puncture, "dir": e.direction}
    return {"type": "orbifold", "point": e.point}


def laminate_from_dict(d: dict, name: str = "") -> Laminate:
    try:
        word = tuple(parse_item(x) for x in d.get("word", []))
        if d.get("shape", "open") == "closed":
            return Laminate(word, None, name)
        ends = tuple(end_from_dict(e) for e in d["ends"])
        if len(ends) != 2:
            raise LaminateParseError("an open laminate has two ends")
        return Laminate(word, ends, name)
    except (KeyError, TypeError) as exc:
        raise LaminateParseError(f"malformed laminate document: {exc}") from exc


def laminate_to_dict(lam: Laminate) -> dict:
    out = {"shape": "closed" if lam.closed else "open", "word": [str(c) for c in lam.word]}
    if not lam.closed:
        out["ends"] = [end_to_dict(e) for e in lam.ends]
    return out


def open_laminate(start, word: Sequence, end, name: str = "") -> Laminate:
    return Laminate(tuple(parse_item(x) for x in word), (start, end), name)


def closed_laminate(word: Sequence, name: str = "") -> Laminate:
    return Laminate(tuple(parse_item(x) for x in word), None, name)


def _flip(h):
    return {"L": "R", "R": "L"}.get(h)


def reverse_items(cx: SurfaceComplex, items: Sequence[Crossing]) -> tuple:
    """The items read backwards.

    Pending side hints flip; slot hints move to the glued slot; turn hints on
    ordinary arcs do not survive reversal and are dropped.
    """
    out = []
    for c in reversed(items):
        if cx.is_pending(c.arc):
            out.append(Crossing(c.arc, _flip(c.hint), c.slot))
            continue
        slot = None
        if c.slot is not None:
            t, i = cx.slots[c.arc][c.slot]
            slot = cx.slot_ordinal(*cx.glue(t, i))
        out.append(Crossing(c.arc, None, slot))
    return tuple(out)


def reverse_laminate(cx: SurfaceComplex, lam: Laminate) -> Laminate:
    word = reverse_items(cx, lam.word)
    if lam.closed:
        return Laminate(word, None, lam.name)
    return Laminate(word, (lam.ends[1], lam.ends[0]), lam.name)


def spiral_reverse(lam: Laminate, p: str) -> Laminate:
    """Flip the direction of every spiral end at puncture ``p``."""
    if lam.closed:
        return lam
    ends = tuple(SpiralEnd(e.puncture, CCW if e.direction == CW else CW)
                 if isinstance(e, SpiralEnd) and e.puncture == p else e for e in lam.ends)
    return replace(lam, ends=ends)


# reduction and exclusion

def _bigon_pair(cx: SurfaceComplex, a: Crossing, b: Crossing) -> bool:
    if a.arc != b.arc:
        return False
    if cx.is_pending(a.arc):
        return a.hint is not None and b.hint is not None and a.hint != b.hint
    where = cx.slots.get(a.arc, ())
    return len(where) == 2 and where[0][0] != where[1][0]


def reduce_word(cx: SurfaceComplex, word: Sequence[Crossing], closed: bool, order=None) -> tuple:
    """Remove bigon pairs until none is left.

    ``order`` optionally picks which removable pair goes first (used to test
    that the result does not depend on the order).
    """
    w = list(word)
    while True:
        m = len(w)
        pairs = [i for i in range(m - 1) if _bigon_pair(cx, w[i], w[i + 1])]
        if closed and m >= 2 and _bigon_pair(cx, w[-1], w[0]):
            pairs.append(m - 1)
        if not pairs:
            return tuple(w)
        i = pairs[order(len(pairs)) if order else 0]
        if i == m - 1:
            w = w[1:-1]
        else:
            del w[i:i + 2]


def _check_item(cx: SurfaceComplex, c: Crossing):
    if c.arc not in cx.slots:
        raise InconsistentWord(f"unknown arc {c.arc!r}")
    if cx.is_boundary(c.arc):
        raise InconsistentWord(f"crossing a boundary segment {c.arc!r}")
    if c.slot is not None and c.slot >= len(cx.slots[c.arc]):
        raise InconsistentWord(f"arc {c.arc!r} has no slot #{c.slot}")


def _share_triangle(cx: SurfaceComplex, a: str, b: str) -> bool:
    ta = {t for t, _ in cx.slots[a]}
    return any(t in ta for t, _ in cx.slots[b])


def validate_and_reduce(cx: SurfaceComplex, lam: Laminate) -> Laminate:
    """Bigon-reduce the word and reject curves that are not laminates."""
    for c in lam.word:
        _check_item(cx, c)
    if not lam.closed:
        for e in lam.ends:
            _check_end(cx, e)
    word = reduce_word(cx, lam.word, lam.closed)
    labels = [c.arc for c in word]
    pairs = list(zip(labels, labels[1:]))
    if lam.closed and len(labels) >= 2:
        pairs.append((labels[-1], labels[0]))
    for a, b in pairs:
        if not _share_triangle(cx, a, b):
            raise InconsistentWord(f"consecutive arcs {a!r} and {b!r} share no triangle")
    out = replace(lam, word=word)
    if lam.closed:
        if not word:
            raise ExcludedCurve("contractible closed curve")
        if cx.is_pending(word[0].arc) and all(c.arc == word[0].arc for c in word):
            # one crossing goes once around the point, more would wind around it again
            raise ExcludedCurve("closed curve around a single orbifold point")
        if not cx.has_orbifold_points():
            path = resolve(cx, out)
            cut = {_cut_corner(cx, seg) for seg in path}
            turns = {turn_of(seg) for seg in path}
            if len(cut) == 1 and len(turns) == 1:
                p = next(iter(cut))
                if cx.is_puncture(p) and len(path) % cx.degree(p) == 0:
                    raise ExcludedCurve("closed curve around a single puncture")
        return out
    a, b = lam.ends
    if isinstance(a, BoundaryEnd) and isinstance(b, BoundaryEnd) and not word:
        raise ExcludedCurve("boundary-parallel curve")
    if isinstance(a, SpiralEnd) and a == b and not word:
        raise ExcludedCurve("curve contractible into a puncture")
    if isinstance(a, OrbifoldEnd) and a == b:
        raise ExcludedCurve("both ends at the same orbifold point")
    return out


def _check_end(cx: SurfaceComplex, e):
    if isinstance(e, BoundaryEnd):
        if not cx.is_boundary(e.segment):
            raise InconsistentWord(f"{e.segment!r} is not a boundary segment")
    elif isinstance(e, SpiralEnd):
        if not cx.is_puncture(e.puncture):
            raise InconsistentWord(f"{e.puncture!r} is not a puncture")
    elif isinstance(e, OrbifoldEnd):
        w = cx.orbifold_points.get(e.point)
        if w is None:
            raise InconsistentWord(f"{e.point!r} is not an orbifold point")
        if w * 2 != 1:
            raise InconsistentWord(f"orbifold end at {e.point!r} needs weight 1/2")
    else:
        raise LaminateParseError(f"unknown end {e!r}")


# hat map

def pending_arc_of(cx: SurfaceComplex, point: str) -> str:
    for arc, q in cx.pending.items():
        if q == point:
            return arc
    raise InconsistentWord(f"no pending arc ends at {point!r}")


def hat_laminate(cx: SurfaceComplex, lam: Laminate) -> Laminate:
    """Transport a laminate to the marked surface replacing orbifold points."""
    if not cx.pending:
        return lam
    word = []
    for c in lam.word:
        if cx.is_pending(c.arc):
            turn = _flip(c.hint)
            word += [Crossing(loop_label(c.arc)), Crossing(inner_label(c.arc), turn), Crossing(loop_label(c.arc), turn)]
        else:
            word.append(c)
    if lam.closed:
        return Laminate(tuple(word), None, lam.name)
    start, end = lam.ends
    if isinstance(start, OrbifoldEnd):
        word.insert(0, Crossing(loop_label(pending_arc_of(cx, start.point))))
        start = SpiralEnd(start.point, CW)
    if isinstance(end, OrbifoldEnd):
        word.append(Crossing(loop_label(pending_arc_of(cx, end.point))))
        end = SpiralEnd(end.point, CW)
    return Laminate(tuple(word), (start, end), lam.name)


# realization

def turn_of(seg) -> str | None:
    _, a, b = seg
    if a is None or b is None:
        return None
    return "R" if b == (a + 1) % 3 else "L"


def _cut_corner(cx: SurfaceComplex, seg):
    t, a, b = seg
    corners = cx.triangles[t].corners
    return corners[a] if b == (a + 1) % 3 else corners[(a - 1) % 3]


def _exit_for(entry: int, turn: str) -> int:
    return (entry + 1) % 3 if turn == "R" else (entry - 1) % 3


def spiral_tail(cx: SurfaceComplex, t: int, e: int, p: str, direction: str, turns: int):
    """Segments of a curve entering triangle ``t`` through side ``e`` and
    spiralling ``turns`` full times into puncture ``p``; None if impossible."""
    x_turn = "R" if direction == CW else "L"
    corners = cx.triangles[t].corners
    cut = corners[e] if x_turn == "R" else corners[(e - 1) % 3]
    segs = []
    if cut != p:
        if corners[(e + 1) % 3] != p:
            return None
        x = _exit_for(e, "L" if x_turn == "R" else "R")
        segs.append((t, e, x))
        nxt = cx.glue(t, x)
        if nxt is None or cx.is_pending(cx.triangles[t].sides[x]):
            return None
        t, e = nxt
        corners = cx.triangles[t].corners
        cut = corners[e] if x_turn == "R" else corners[(e - 1) % 3]
        if cut != p:
            return None
    for _ in range(turns * cx.degree(p)):
        x = _exit_for(e, x_turn)
        segs.append((t, e, x))
        t, e = cx.glue(t, x)
    segs.append((t, e, None))
    return segs


def _reverse_path(path) -> tuple:
    return tuple((t, b, a) for t, a, b in reversed(path))


def _key(path) -> tuple:
    return tuple((t, -1 if a is None else a, -1 if b is None else b) for t, a, b in path)


def canonical_path(path, closed: bool) -> tuple:
    if not closed:
        rev = _reverse_path(path)
        return min((tuple(path), rev), key=_key)
    options = []
    for p in (tuple(path), _reverse_path(path)):
        for r in range(len(p)):
            options.append(p[r:] + p[:r])
    return min(options, key=_key)


def _hint_ok(cx, c: Crossing, t: int, entry, exit_: int) -> bool:
    if c.slot is not None and cx.slots[c.arc][c.slot] != (t, exit_):
        return False
    if c.hint is not None and entry is not None and turn_of((t, entry, exit_)) != c.hint:
        return False
    return True


def _crossing_exits(cx, c: Crossing, t: int, entry):
    for i, s in enumerate(cx.triangles[t].sides):
        if s == c.arc and i != entry and _hint_ok(cx, c, t, entry, i):
            yield i


def realizations(cx: SurfaceComplex, lam: Laminate, turns: int = 2) -> list:
    """All distinct normal paths realizing the laminate on a marked surface."""
    if cx.has_orbifold_points():
        raise InconsistentWord("realize the hat of an orbifold laminate instead")
    word = lam.word
    found = {}

    if lam.closed:
        if not word:
            return []
        first = word[0]

        for (t0, x0) in cx.slots[first.arc]:
            if first.slot is not None and cx.slots[first.arc][first.slot] != (t0, x0):
                continue
            t1, e1 = cx.glue(t0, x0)

            def finish(t, entry, segs, t0=t0, x0=x0):
                if t != t0 or entry == x0:
                    return
                if first.hint is not None and turn_of((t, entry, x0)) != first.hint:
                    return
                path = segs + [(t, entry, x0)]
                found[canonical_path(path, True)] = path

            _walk_from(cx, word[1:], t1, e1, finish)
        return [list(p) for p in sorted(found, key=_key)]

    start, end = lam.ends
    if not word:
        if isinstance(end, BoundaryEnd) and not isinstance(start, BoundaryEnd):
            rev = realizations(cx, reverse_laminate(cx, lam), turns)
            return [list(_reverse_path(p)) for p in rev]
        if not isinstance(start, BoundaryEnd):
            raise InconsistentWord("an empty word needs a boundary end")

    def finish_open(t, entry, segs):
        if isinstance(end, BoundaryEnd):
            for i, s in enumerate(cx.triangles[t].sides):
                if s == end.segment and i != entry:
                    path = segs + [(t, entry, i)]
                    found[canonical_path(path, False)] = path
        else:
            tail = spiral_tail(cx, t, entry, end.puncture, end.direction, turns)
            if tail is not None:
                path = segs + tail
                found[canonical_path(path, False)] = path

    if isinstance(start, BoundaryEnd):
        for t, i in cx.slots[start.segment]:
            if not word:
                finish_open(t, i, [])
            else:
                _walk_from(cx, word, t, i, finish_open)
    else:
        first = word[0]
        for t0, x0 in cx.slots[first.arc]:
            if first.slot is not None and cx.slots[first.arc][first.slot] != (t0, x0):
                continue
            tail = spiral_tail(cx, t0, x0, start.puncture, start.direction, turns)
            if tail is None:
                continue
            head = list(_reverse_path(tail))
            last = head[-1]
            if first.hint is not None and turn_of(last) != first.hint:
                continue
            nxt = cx.glue(t0, x0)
            if nxt is None:
                continue
            _walk_from(cx, word[1:], nxt[0], nxt[1], finish_open, head)
    return [list(p) for p in sorted(found, key=_key)]


def _walk_from(cx, word, t, entry, finish, prefix=None):
    stack = [(t, entry, 0, list(prefix or []))]
    while stack:
        t, entry, idx, segs = stack.pop()
        if idx == len(word):
            finish(t, entry, segs)
            continue
        c = word[idx]
        for x in _crossing_exits(cx, c, t, entry):
            nxt = cx.glue(t, x)
            if nxt is None:
                continue
            stack.append((nxt[0], nxt[1], idx + 1, segs + [(t, entry, x)]))


def resolve(cx: SurfaceComplex, lam: Laminate, turns: int = 2) -> list:
    """The unique normal path of a laminate on a marked surface."""
    paths = realizations(cx, lam, turns)
    if not paths:
        raise InconsistentWord(f"no normal path realizes {describe(lam)}")
    if len(paths) > 1:
        raise AmbiguousWord(f"{len(paths)} normal paths realize {describe(lam)}; add slot or turn hints")
    return paths[0]


def crossings(cx: SurfaceComplex, path, closed: bool) -> list:
    """(arc, turn before, turn after) for every crossing of the path."""
    out = []
    m = len(path)
    last = m if closed else m - 1
    for k in range(last):
        a, b = path[k], path[(k + 1) % m]
        arc = cx.triangles[a[0]].sides[a[2]]
        out.append((arc, turn_of(a), turn_of(b)))
    return out


def describe(lam: Laminate) -> str:
    word = " ".join(str(c) for c in lam.word)
    if lam.closed:
        return f"closed [{word}]"
    return f"{_end_str(lam.ends[0])} [{word}] {_end_str(lam.ends[1])}"


def _end_str(e) -> str:
    if isinstance(e, BoundaryEnd):
        return f"boundary({e.segment})"
    if isinstance(e, SpiralEnd):
        return f"spiral({e.puncture},{e.direction})"
    return f"orbifold({e.point})"
