"""Exact graded Laurent polynomials in x1..xn (invertible) and y1..yn.

A polynomial is a sparse mapping from an exponent tuple of length 2n
(x exponents followed by y exponents) to an exact rational coefficient.
Coefficients are kept as ``int`` when integral and ``Fraction`` otherwise,
so the common all-integer case stays fast while remaining exact.
"""
from __future__ import annotations

import heapq
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Coeff = Union[int, Fraction]
Exponent = tuple  # tuple[int, ...] of length 2n


class AlgebraError(Exception):
    pass


class DimensionMismatch(AlgebraError):
    pass


class InexactDivision(AlgebraError):
    pass


class Inhomogeneous(AlgebraError):
    def __init__(self, first, second):
        super().__init__(f"terms of distinct degree: {first} vs {second}")
        self.terms = (first, second)


class PolyParseError(AlgebraError, ValueError):
    pass


def _norm(c) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """Immutable sparse Laurent polynomial with exact coefficients."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Exponent, Coeff] | None = None):
        self.n = n
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != 2 * n:
                    raise DimensionMismatch(f"exponent {e} does not have length {2 * n}")
                if c:
                    clean[tuple(e)] = _norm(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "LaurentPoly":
        # trusted constructor: no zero coefficients, normalized
        p = cls.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "LaurentPoly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Coeff) -> "LaurentPoly":
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def monomial(cls, n: int, x: Sequence[int] = (), y: Sequence[int] = (), coeff: Coeff = 1) -> "LaurentPoly":
        xs = list(x) + [0] * (n - len(x))
        ys = list(y) + [0] * (n - len(y))
        return cls(n, {tuple(xs + ys): coeff})

    @classmethod
    def x(cls, n: int, i: int) -> "LaurentPoly":
        """The variable x_i (1-based)."""
        e = [0] * (2 * n)
        e[i - 1] = 1
        return cls._raw(n, {tuple(e): 1})

    @classmethod
    def y(cls, n: int, j: int) -> "LaurentPoly":
        """The coefficient variable y_j (1-based)."""
        e = [0] * (2 * n)
        e[n + j - 1] = 1
        return cls._raw(n, {tuple(e): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (descending lexicographic) order."""
        return sorted(self._terms.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.n != self.n:
                raise DimensionMismatch(f"n={self.n} vs n={other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.n, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        return poly_arith(self, self._coerce(other), "add")

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return poly_arith(self, -self._coerce(other), "add")

    def __rsub__(self, other):
        return poly_arith(-self, self._coerce(other), "add")

    def __mul__(self, other):
        return poly_arith(self, self._coerce(other), "mul")

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise InexactDivision("negative power of a non-monomial")
            (e, c), = self._terms.items()
            return LaurentPoly(self.n, {tuple(a * k for a in e): Fraction(c) ** k})
        result = LaurentPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        return poly_div_exact(self, self._coerce(other))

    def __repr__(self) -> str:
        return f"LaurentPoly({self.n}, {to_string(self)!r})"

    def __str__(self) -> str:
        return to_string(self)

    def y_exponents_nonnegative(self) -> bool:
        n = self.n
        return all(min(e[n:], default=0) >= 0 for e in self._terms)

    def leading(self):
        return max(self._terms)

    def trailing(self):
        return min(self._terms)


def poly_arith(a: LaurentPoly, b: LaurentPoly, which: str) -> LaurentPoly:
    """Add or multiply two polynomials over the same number of variables."""
    if a.n != b.n:
        raise DimensionMismatch(f"n={a.n} vs n={b.n}")
    if which == "add":
        out = dict(a._terms)
        for e, c in b._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return LaurentPoly._raw(a.n, out)
    if which == "mul":
        if len(a._terms) < len(b._terms):
            a, b = b, a
        if not b._terms:
            return LaurentPoly.zero(a.n)
        # pack exponent vectors into single integers so the inner loop adds ints
        width = 2 * a.n
        bias = 1 + max(abs(x) for p in (a, b) for e in p._terms for x in e)
        shift = (4 * bias).bit_length()

        def pack(e):
            return sum((x + bias) << (shift * i) for i, x in enumerate(e))

        double_bias = pack((0,) * width)
        out: dict = {}
        get = out.get
        bt = [(pack(e), c) for e, c in b._terms.items()]
        for ea, ca in a._terms.items():
            ka = pack(ea) - double_bias
            for kb, cb in bt:
                key = ka + kb
                out[key] = get(key, 0) + ca * cb
        mask = (1 << shift) - 1
        terms = {}
        for key, c in out.items():
            if c:
                key += double_bias
                terms[tuple(((key >> (shift * i)) & mask) - 2 * bias for i in range(width))] = _norm(c)
        return LaurentPoly._raw(a.n, terms)
    raise ValueError(f"unknown operation {which!r}")


def _sub_exp(a, b):
    return tuple([p - q for p, q in zip(a, b)])


def _coord_min(p: LaurentPoly) -> tuple:
    return tuple(map(min, zip(*p._terms)))


def _coord_max(p: LaurentPoly) -> tuple:
    return tuple(map(max, zip(*p._terms)))


def poly_div_exact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``num / den`` by leading-term elimination.

    Newton polytopes add under multiplication, so every exponent of an exact
    quotient lies in the box [min(num) - min(den), max(num) - max(den)]
    coordinatewise. A quotient term outside that box proves the division is
    inexact, which also bounds the loop. The result is checked by multiplying
    back.
    """
    if num.n != den.n:
        raise DimensionMismatch(f"n={num.n} vs n={den.n}")
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    n = num.n
    if num.is_zero():
        return LaurentPoly.zero(n)
    if len(den._terms) == 1:
        (ed, cd), = den._terms.items()
        q = LaurentPoly._raw(n, {_sub_exp(e, ed): _norm(Fraction(c) / cd) for e, c in num._terms.items()})
    else:
        lt_den = den.leading()
        lc_den = den._terms[lt_den]
        lo = _sub_exp(_coord_min(num), _coord_min(den))
        hi = _sub_exp(_coord_max(num), _coord_max(den))
        rem = dict(num._terms)
        heap = [tuple(-a for a in e) for e in rem]
        heapq.heapify(heap)
        quot: dict = {}
        den_items = list(den._terms.items())
        while rem:
            top = tuple(-a for a in heapq.heappop(heap))
            c = rem.get(top)
            if not c:
                continue
            qe = _sub_exp(top, lt_den)
            if any(a < l or a > h for a, l, h in zip(qe, lo, hi)):
                raise InexactDivision(f"no exact Laurent quotient of {num} by {den}")
            qc = _norm(Fraction(c) / lc_den) if not isinstance(c, int) or c % lc_den else c // lc_den
            quot[qe] = qc
            for ed, cd in den_items:
                e = tuple([p + r for p, r in zip(qe, ed)])
                old = rem.get(e)
                if old is None:
                    rem[e] = -qc * cd
                    heapq.heappush(heap, tuple(-a for a in e))
                else:
                    s = old - qc * cd
                    if s:
                        rem[e] = s
                    else:
                        del rem[e]
        q = LaurentPoly._raw(n, {e: _norm(c) for e, c in quot.items()})
    if q * den != num:
        raise InexactDivision(f"no exact Laurent quotient of {num} by {den}")
    return q


class Grading:
    """Z^n degrees of the x and y variables."""

    def __init__(self, x_degrees: Sequence[Sequence[int]], y_degrees: Sequence[Sequence[int]]):
        self.x_degrees = tuple(tuple(v) for v in x_degrees)
        self.y_degrees = tuple(tuple(v) for v in y_degrees)
        self.n = len(self.x_degrees)

    @classmethod
    def from_matrix(cls, B: Sequence[Sequence[int]]) -> "Grading":
        n = len(B)
        xs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        ys = [tuple(-B[i][j] for i in range(n)) for j in range(n)]
        return cls(xs, ys)

    def degree_of_exponent(self, e: Exponent) -> tuple:
        n = self.n
        out = [0] * n
        for a, v in zip(e, self.x_degrees + self.y_degrees):
            if a:
                for i in range(n):
                    out[i] += a * v[i]
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, Grading) and (self.x_degrees, self.y_degrees) == (other.x_degrees, other.y_degrees)

    def __hash__(self):
        return hash((self.x_degrees, self.y_degrees))


def grade_of(f: LaurentPoly, g: Grading) -> tuple:
    """Common degree of all terms of ``f``; raises Inhomogeneous otherwise."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no degree")
    if f.n != g.n:
        raise DimensionMismatch(f"n={f.n} vs grading n={g.n}")
    deg = None
    first = None
    for e in f._terms:
        d = g.degree_of_exponent(e)
        if deg is None:
            deg, first = d, e
        elif d != deg:
            raise Inhomogeneous(_monomial_string(f.n, first, 1), _monomial_string(f.n, e, 1))
    return deg


# canonical strings

def _monomial_string(n: int, e: Exponent, c: Coeff) -> str:
    factors = []
    for idx, a in enumerate(e):
        if a:
            name = f"x{idx + 1}" if idx < n else f"y{idx - n + 1}"
            factors.append(name if a == 1 else f"{name}^{a}")
    mono = "*".join(factors)
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def to_string(p: LaurentPoly) -> str:
    """Canonical string: terms in descending lexicographic exponent order."""
    items = p.items()
    if not items:
        return "0"
    parts = []
    for k, (e, c) in enumerate(items):
        s = _monomial_string(p.n, e, c)
        if k == 0:
            parts.append(s)
        elif s.startswith("-"):
            parts.append("- " + s[1:])
        else:
            parts.append("+ " + s)
    return " ".join(parts)


_FACTOR = re.compile(r"^([xy])(\d+)(?:\^(-?\d+))?$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")


def parse_poly(text: str, n: int) -> LaurentPoly:
    """Parse the canonical form (factor order within a term is free)."""
    s = text.replace(" ", "")
    if not s:
        raise PolyParseError("empty polynomial string")
    if s == "0":
        return LaurentPoly.zero(n)
    chunks = [c for c in re.split(r"(?<!\^)(?=[+-])", s) if c]
    terms: dict = {}
    for chunk in chunks:
        sign = -1 if chunk.startswith("-") else 1
        body = chunk.lstrip("+-")
        coeff: Coeff = 1
        e = [0] * (2 * n)
        for factor in body.split("*"):
            if _NUMBER.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise PolyParseError(f"bad factor {factor!r} in {text!r}")
            var, idx, power = m.group(1), int(m.group(2)), int(m.group(3) or 1)
            if not 1 <= idx <= n:
                raise PolyParseError(f"variable {var}{idx} out of range for n={n}")
            if var == "y" and power < 0:
                raise PolyParseError(f"coefficient variable y{idx} cannot have a negative exponent")
            e[idx - 1 + (n if var == "y" else 0)] += power
        key = tuple(e)
        terms[key] = terms.get(key, 0) + sign * coeff
    return LaurentPoly(n, terms)


def from_terms(n: int, pairs: Iterable[tuple]) -> LaurentPoly:
    out: dict = {}
    for e, c in pairs:
        out[tuple(e)] = out.get(tuple(e), 0) + c
    return LaurentPoly(n, out)
