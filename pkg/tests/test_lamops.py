from fractions import Fraction

import pytest

from gfan.catalogs import load_catalog
from gfan.laminate import CCW, CW, Laminate, OrbifoldEnd, SpiralEnd, closed_laminate
from gfan.lamops import (NoOrbifoldEnd, NotEventuallyLinear, NotExceptional, UnsupportedEndConfiguration,
                         classify_laminate, double_lamination, enclose_double, make_elementary, predicted_sum,
                         split_exceptional, sum_statistic, twist_family_check)
from gfan.shear import shear

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def digon():
    return load_catalog("digon")


@pytest.fixture(scope="module")
def monogon():
    return load_catalog("monogon")


@pytest.fixture(scope="module")
def sphere():
    return load_catalog("sphere_half_half_half")


def test_elementary_of_monogon_arcs(monogon):
    T = monogon.triangulation
    # weight-2 arc: replaced by the loop around it; weight-1/2 arc: keeps its orbifold end
    assert shear(T, make_elementary(monogon.complex, "1")) == (-1, 0)
    se2 = make_elementary(monogon.complex, "2")
    assert se2.ends[1] == OrbifoldEnd("q")
    assert shear(T, se2) == (0, -1)


def test_elementary_spiral_ends(sphere):
    cx = sphere.complex
    assert make_elementary(cx, "1").ends[0] == SpiralEnd("o", CW)
    assert make_elementary(cx, "1", ("notched", "plain")).ends[0] == SpiralEnd("o", CCW)


def test_elementary_unknown_arc(digon):
    with pytest.raises(UnsupportedEndConfiguration):
        make_elementary(digon.complex, "BR")


@pytest.mark.parametrize("catalog", ["torus", "sphere_half_half_half", "sphere_half_half_two"])
def test_elementary_shear_is_minus_unit(catalog):
    cat = load_catalog(catalog)
    T = cat.triangulation
    labels = list(getattr(T, "labels", None) or T.arcs)
    for i, arc in enumerate(labels):
        v = shear(T, make_elementary(cat.complex, arc))
        assert v == tuple(-1 if j == i else 0 for j in range(len(labels)))


def test_torus_elementary_vectors_distinct():
    cat = load_catalog("torus")
    vectors = [shear(cat.triangulation, make_elementary(cat.complex, e["arc"], e["tags"]))
               for e in cat.doc["elementary"]]
    assert all(any(v) for v in vectors)
    assert len(set(vectors)) == len(vectors)


def test_classification(digon, monogon, sphere):
    assert classify_laminate(monogon.complex, monogon.laminates["c"]) == "closed"
    assert classify_laminate(digon.complex, digon.laminates["l2"]) == "exceptional"
    assert classify_laminate(digon.complex, digon.laminates["l1"]) == "elementary"
    assert classify_laminate(sphere.complex, sphere.laminates["s12"]) == "semi-closed"
    assert classify_laminate(monogon.complex, monogon.laminates["r0'"]) == "exceptional"
    assert classify_laminate(monogon.complex, monogon.laminates["l0"]) == "elementary"


@pytest.mark.parametrize("name,parts", [("l2", ("l3", "l1")), ("l5", ("l4", "l6"))])
def test_split_digon(digon, name, parts):
    T = digon.triangulation
    first, second = split_exceptional(digon.complex, digon.laminates[name])
    assert (shear(T, first), shear(T, second)) == tuple(shear(T, digon.laminates[p]) for p in parts)
    whole = shear(T, digon.laminates[name])
    assert whole == tuple(a + b for a, b in zip(shear(T, first), shear(T, second)))


def test_split_around_orbifold_point(monogon):
    T = monogon.triangulation
    first, second = split_exceptional(monogon.complex, monogon.laminates["r0'"])
    assert shear(T, first) == shear(T, second) == shear(T, monogon.laminates["r0"])


def test_split_rejects_elementary(digon):
    with pytest.raises(NotExceptional):
        split_exceptional(digon.complex, digon.laminates["l1"])


def test_enclose_double(monogon, sphere):
    T = monogon.triangulation
    r0p = enclose_double(monogon.complex, monogon.laminates["r0"])
    assert shear(T, r0p) == (0, -2)
    with pytest.raises(NoOrbifoldEnd):
        enclose_double(monogon.complex, r0p)
    s12 = sphere.laminates["s12"]
    doubled = enclose_double(sphere.complex, s12)
    assert doubled.closed
    base = shear(sphere.triangulation, s12)
    assert shear(sphere.triangulation, doubled) == tuple(2 * x for x in base)


def _total(T, lams):
    return tuple(sum(v) for v in zip(*(shear(T, lam) for lam in lams)))


def test_double_lamination(monogon):
    T, cx = monogon.triangulation, monogon.complex
    r0, l0 = monogon.laminates["r0"], monogon.laminates["l0"]
    assert [shear(T, x) for x in double_lamination(cx, [r0])] == [(0, -2)]
    assert double_lamination(cx, [l0]) == [l0, l0]
    both = double_lamination(cx, [l0, r0])
    assert _total(T, both) == (-2, -2) == tuple(2 * x for x in _total(T, [l0, r0]))


@pytest.mark.parametrize("catalog", ["sphere_half_half_half", "sphere_half_half_two"])
def test_sphere_sum_statistics(catalog):
    cat = load_catalog(catalog)
    for name, lam in cat.laminates.items():
        value = sum_statistic(cat.triangulation, shear(cat.triangulation, lam))
        assert value == Fraction(cat.expected["sum"][name]) == predicted_sum(lam), name


def test_sum_statistic_cases():
    assert predicted_sum(Laminate((), (SpiralEnd("o", CW), SpiralEnd("o", CW)))) == -1
    assert predicted_sum(Laminate((), (SpiralEnd("o", CW), OrbifoldEnd("p")))) == -HALF
    assert predicted_sum(Laminate((), (SpiralEnd("o", CW), SpiralEnd("o", CCW)))) == 0
    assert predicted_sum(Laminate((), (OrbifoldEnd("p"), OrbifoldEnd("q")))) == 0


def test_sum_statistic_weights_pending_half(sphere):
    assert sum_statistic(sphere.triangulation, (2, 2, 2)) == 3
    torus = load_catalog("torus")
    assert sum_statistic(torus.triangulation, (1, -2, 3)) == 2
    with pytest.raises(Exception):
        sum_statistic(torus.triangulation, (1, 2))


def test_twist_families(monogon):
    T = monogon.triangulation
    c = shear(T, monogon.laminates["c"])
    out = twist_family_check(lambda m: shear(T, monogon.family("l", m - 1)), c, 2)
    assert out["m_prime"] == 1 and out["slope"] == (-2, 4)
    out = twist_family_check(lambda m: shear(T, monogon.family("r", m)), c, 1)
    assert out["slope"] == (-1, 2)


def test_twist_constant_family():
    out = twist_family_check(lambda m: (3, -1), (-1, 2), 0)
    assert out == {"m_prime": 0, "slope": (0, 0), "verified": True}


def test_twist_not_linear():
    with pytest.raises(NotEventuallyLinear):
        twist_family_check(lambda m: (m * m, 0), (1, 0), 1)


def test_family_members_match_catalog(monogon):
    for i in range(-4, 5):
        for fam in ("l", "r"):
            assert monogon.family(fam, i).word == monogon.laminates[f"{fam}{i}"].word


def test_closed_prediction_undefined():
    with pytest.raises(Exception):
        predicted_sum(closed_laminate(["1"]))
