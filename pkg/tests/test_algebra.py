from fractions import Fraction

import pytest

from gfan.algebra import (DimensionMismatch, Grading, InexactDivision, Inhomogeneous, LaurentPoly, PolyParseError,
                          grade_of, parse_poly, poly_arith, poly_div_exact, to_string)

x1, x2 = LaurentPoly.x(2, 1), LaurentPoly.x(2, 2)
y1, y2 = LaurentPoly.y(2, 1), LaurentPoly.y(2, 2)
GRADING = Grading.from_matrix([[0, -1], [4, 0]])


def test_distribute_over_monomial():
    f = poly_arith(x1 + y2, LaurentPoly.monomial(2, (0, -1)), "mul")
    assert f == LaurentPoly.monomial(2, (1, -1)) + LaurentPoly.monomial(2, (0, -1), (0, 1))


def test_additive_identity():
    f = x1 * x2 + 3 * y1
    assert poly_arith(f, LaurentPoly.zero(2), "add") == f


def test_difference_of_squares():
    # expanded by hand: x1^2 - y2^2
    got = (x1 + y2) * (x1 - y2)
    assert got.terms == {(2, 0, 0, 0): 1, (0, 0, 0, 2): -1}


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        poly_arith(x1, LaurentPoly.x(3, 1), "add")


def test_exact_division_cases():
    s = x1 + y2
    assert poly_div_exact(s * s, s) == s
    assert poly_div_exact(s, x2) == x1 * LaurentPoly.monomial(2, (0, -1)) + y2 * LaurentPoly.monomial(2, (0, -1))
    assert poly_div_exact(x1 * x1 - y2 * y2, s) == x1 - y2


def test_inexact_division():
    one = LaurentPoly.constant(2, 1)
    with pytest.raises(InexactDivision):
        poly_div_exact(x1 + one, x2 + one)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_div_exact(x1, LaurentPoly.zero(2))


def test_grading_of_example_variables():
    assert grade_of(poly_div_exact(x1 + y2, x2), GRADING) == (1, -1)
    assert grade_of(x1, GRADING) == (1, 0)
    assert grade_of(y1, GRADING) == (0, -4)
    assert grade_of(y2, GRADING) == (1, 0)


def test_inhomogeneous():
    with pytest.raises(Inhomogeneous):
        grade_of(x1 + x2, GRADING)


def test_canonical_string():
    f = poly_div_exact(x1 + y2, x2)
    assert to_string(f) == "x1*x2^-1 + x2^-1*y2"
    assert parse_poly("y2*x2^-1 + x1*x2^-1", 2) == f
    assert parse_poly(to_string(f), 2) == f
    assert to_string(LaurentPoly.zero(2)) == "0"


def test_rational_coefficients():
    f = parse_poly("1/2*x1 - 3/4*y1^2", 2)
    assert f.terms[(1, 0, 0, 0)] == Fraction(1, 2)
    assert parse_poly(to_string(f), 2) == f


@pytest.mark.parametrize("bad", ["x3", "x1^", "y1^-1", "x1 +* y2", ""])
def test_parse_errors(bad):
    with pytest.raises(PolyParseError):
        parse_poly(bad, 2)
