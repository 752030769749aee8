"""Skew-symmetrizable matrices, principal coefficients and seed mutation.

Matrices are tuples of row tuples of Python ints. Mutation indices are
1-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .algebra import Grading, LaurentPoly, grade_of, poly_div_exact, to_string

Matrix = tuple  # tuple[tuple[int, ...], ...]


class MutationError(Exception):
    pass


class NotSkewSymmetrizable(MutationError):
    pass


class IndexOutOfRange(MutationError, IndexError):
    pass


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(v) for v in row) for row in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    return m


def find_symmetrizer(B: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Minimal positive integer d with b_ij d_j = -b_ji d_i.

    Ratios are propagated along a spanning forest of the nonzero-entry graph
    and every entry is checked afterwards.
    """
    B = as_matrix(B)
    n = len(B)
    if any(len(r) != n for r in B):
        raise NotSkewSymmetrizable("matrix is not square")
    d: list = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if B[i][j] == 0 and B[j][i] == 0:
                    continue
                if B[i][j] == 0 or B[j][i] == 0:
                    raise NotSkewSymmetrizable(f"b[{i + 1}][{j + 1}] and b[{j + 1}][{i + 1}] are not both nonzero")
                dj = Fraction(-B[j][i], B[i][j]) * d[i]
                if dj <= 0:
                    raise NotSkewSymmetrizable(f"entries ({i + 1},{j + 1}) force a non-positive ratio")
                if d[j] is None:
                    d[j] = dj
                    stack.append(j)
    for i in range(n):
        if B[i][i] != 0:
            raise NotSkewSymmetrizable(f"nonzero diagonal entry at {i + 1}")
        for j in range(n):
            if B[i][j] * d[j] != -B[j][i] * d[i]:
                raise NotSkewSymmetrizable(f"inconsistent ratio at ({i + 1},{j + 1})")
    den = lcm(*(x.denominator for x in d)) if d else 1
    ints = [int(x * den) for x in d]
    g = gcd(*ints) if ints else 1
    return tuple(v // g for v in ints)


def mutate_matrix(A: Sequence[Sequence[int]], k: int) -> Matrix:
    """Matrix mutation at the 1-based column index k."""
    A = as_matrix(A)
    n = len(A[0]) if A else 0
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"mutation index {k} outside 1..{n}")
    k -= 1
    rk = A[k]
    out = []
    for i, row in enumerate(A):
        if i == k:
            out.append(tuple(-v for v in row))
            continue
        aik = row[k]
        new = []
        for j, aij in enumerate(row):
            if j == k:
                new.append(-aij)
            else:
                akj = rk[j]
                new.append(aij + aik * max(akj, 0) + max(-aik, 0) * akj)
        out.append(tuple(new))
    return tuple(out)


def principal_extension(B: Sequence[Sequence[int]]) -> Matrix:
    B = as_matrix(B)
    find_symmetrizer(B)
    n = len(B)
    return B + tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def top_block(A: Matrix) -> Matrix:
    return A[: len(A[0])]


@dataclass(frozen=True)
class Seed:
    cluster: tuple
    matrix: Matrix
    grading: Grading
    history: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.cluster)

    def coefficients(self) -> tuple:
        return tuple(LaurentPoly.y(self.n, j) for j in range(1, self.n + 1))

    def __eq__(self, other):
        return isinstance(other, Seed) and self.cluster == other.cluster and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.cluster, self.matrix))


def initial_seed(B: Sequence[Sequence[int]]) -> Seed:
    B = as_matrix(B)
    A = principal_extension(B)
    n = len(B)
    cluster = tuple(LaurentPoly.x(n, i) for i in range(1, n + 1))
    return Seed(cluster, A, Grading.from_matrix(B), ())


def exchange_binomial(s: Seed, k: int) -> LaurentPoly:
    """Right-hand side of the exchange relation at k, in initial variables."""
    n = s.n
    col = [row[k - 1] for row in s.matrix]
    plus = LaurentPoly.constant(n, 1)
    minus = LaurentPoly.constant(n, 1)
    y_plus = [0] * n
    y_minus = [0] * n
    for i in range(n):
        a = col[i]
        if a > 0:
            plus = plus * s.cluster[i] ** a
        elif a < 0:
            minus = minus * s.cluster[i] ** (-a)
    for j in range(n):
        a = col[n + j]
        if a > 0:
            y_plus[j] = a
        elif a < 0:
            y_minus[j] = -a
    plus = plus * LaurentPoly.monomial(n, (), y_plus)
    minus = minus * LaurentPoly.monomial(n, (), y_minus)
    return plus + minus


def mutate_seed(s: Seed, k: int) -> Seed:
    n = s.n
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"mutation index {k} outside 1..{n}")
    new_var = poly_div_exact(exchange_binomial(s, k), s.cluster[k - 1])
    cluster = s.cluster[: k - 1] + (new_var,) + s.cluster[k:]
    return Seed(cluster, mutate_matrix(s.matrix, k), s.grading, s.history + (k,))


def mutate_word(s: Seed, word: Sequence[int]) -> Seed:
    for k in word:
        s = mutate_seed(s, k)
    return s


def g_vector(s: Seed, k: int) -> tuple:
    if not 1 <= k <= s.n:
        raise IndexOutOfRange(f"index {k} outside 1..{s.n}")
    return grade_of(s.cluster[k - 1], s.grading)


def g_vectors(s: Seed) -> tuple:
    return tuple(g_vector(s, k) for k in range(1, s.n + 1))


def fingerprint(gs: Sequence[Sequence[int]], A: Matrix) -> tuple:
    """Key from g-vectors and extended matrix, independent of labelling."""
    n = len(gs)
    order = sorted(range(n), key=lambda i: tuple(gs[i]))
    top = tuple(tuple(A[order[i]][order[j]] for j in range(n)) for i in range(n))
    bottom = tuple(tuple(row[order[j]] for j in range(n)) for row in A[n:])
    return (tuple(tuple(gs[i]) for i in order), top + bottom)


def seed_fingerprint(s: Seed) -> tuple:
    return fingerprint(g_vectors(s), s.matrix)


def seed_export(s: Seed) -> dict:
    return {
        "history": list(s.history),
        "matrix": [list(r) for r in s.matrix],
        "cluster": [to_string(x) for x in s.cluster],
        "g_vectors": [list(g) for g in g_vectors(s)],
    }
