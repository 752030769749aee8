"""One-shot verification of the bundled worked examples.

Each check returns a CheckResult; ``run_checks`` runs a selection and the
CLI turns any failure into exit code 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import parse_poly, poly_div_exact
from .catalogs import CatalogError, as_fraction_vector, load_bundled_spec, load_catalog, load_document
from .laminate import LaminateError
from .lamops import (double_lamination, enclose_double, predicted_sum, split_exceptional,
                     sum_statistic, twist_family_check)
from .mutation import g_vectors, initial_seed, mutate_matrix, mutate_word, principal_extension
from .orbifold import assemble_matrix
from .shear import ShearError, shear

EXAMPLE_B = ((0, -1), (4, 0))
EXAMPLE_WORD = (2, 1, 2)
EXAMPLE_MATRICES = (
    ((0, -1), (4, 0), (1, 0), (0, 1)),
    ((0, 1), (-4, 0), (1, 0), (4, -1)),
    ((0, -1), (4, 0), (-1, 1), (-4, 3)),
    ((0, 1), (-4, 0), (3, -1), (8, -3)),
)
# (numerator, denominator) of the variable replaced at each step
EXAMPLE_VARIABLES = (
    ("x1 + y2", "x2"),
    ("(x1+y2)^4 + y1*y2^4*x2^4", "x1*x2^4"),
    ("(x1+y2)^3 + y1*y2^3*x2^4", "x1*x2^3"),
)
EXAMPLE_G = ((1, -1), (3, -4), (2, -3))


@dataclass
class CheckResult:
    name: str
    ok: bool
    checked: int = 0
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checked": self.checked, "failures": self.failures}


def _expand(text: str):
    """Parse with parenthesised powers expanded, e.g. (x1+y2)^4."""
    import re
    m = re.fullmatch(r"\((.+)\)\^(\d+)(.*)", text.replace(" ", ""))
    if not m:
        return parse_poly(text, 2)
    head = parse_poly(m.group(1), 2) ** int(m.group(2))
    rest = m.group(3)
    return head + parse_poly(rest.lstrip("+"), 2) if rest else head


def check_mutation_trace(directory=None) -> CheckResult:
    res = CheckResult("mutation-trace", True)
    A = principal_extension(EXAMPLE_B)
    mats = [A]
    for k in EXAMPLE_WORD:
        A = mutate_matrix(A, k)
        mats.append(A)
    for step, (got, want) in enumerate(zip(mats, EXAMPLE_MATRICES)):
        res.checked += 1
        if got != want:
            res.failures.append({"step": step, "got": [list(r) for r in got], "want": [list(r) for r in want]})
    res.ok = not res.failures
    return res


def check_seed_trace(directory=None) -> CheckResult:
    res = CheckResult("seed-trace", True)
    s = initial_seed(EXAMPLE_B)
    for step, k in enumerate(EXAMPLE_WORD):
        s = mutate_word(s, [k])
        num, den = EXAMPLE_VARIABLES[step]
        want = poly_div_exact(_expand(num), parse_poly(den, 2))
        res.checked += 2
        if s.cluster[k - 1] != want:
            res.failures.append({"step": step + 1, "variable": str(s.cluster[k - 1]), "want": str(want)})
        g = g_vectors(s)[k - 1]
        if g != EXAMPLE_G[step]:
            res.failures.append({"step": step + 1, "g": list(g), "want": list(EXAMPLE_G[step])})
    res.ok = not res.failures
    return res


def _shear_table(name: str, directory) -> CheckResult:
    cat = load_catalog(name, directory)
    res = CheckResult(name, True)
    for lam_name, want in cat.expected.get("shear", {}).items():
        got = shear(cat.triangulation, cat.laminates[lam_name])
        res.checked += len(want)
        if tuple(got) != as_fraction_vector(want):
            res.failures.append({"laminate": lam_name, "got": [str(x) for x in got], "want": want})
    res.ok = not res.failures
    return res


def check_digon(directory=None) -> CheckResult:
    return _shear_table("digon", directory)


def check_monogon(directory=None) -> CheckResult:
    return _shear_table("monogon", directory)


def check_catalog_rows(directory=None) -> CheckResult:
    res = CheckResult("catalog-rows", True)
    spec = load_bundled_spec("monogon_spec", directory)
    B, _ = assemble_matrix(spec)
    res.checked += 1
    if B != EXAMPLE_B:
        res.failures.append({"spec": "monogon_spec", "got": [list(r) for r in B], "want": [list(r) for r in EXAMPLE_B]})
    res.ok = not res.failures
    return res


def check_additivity(directory=None) -> CheckResult:
    res = CheckResult("additivity", True)
    for name in ("digon", "monogon"):
        cat = load_catalog(name, directory)
        T = cat.triangulation
        for lam_name, parts in cat.expected.get("exceptional", {}).items():
            lam = cat.laminates[lam_name]
            first, second = split_exceptional(cat.complex, lam)
            whole = shear(T, lam)
            total = tuple(a + b for a, b in zip(shear(T, first), shear(T, second)))
            want_p, want_q = (shear(T, cat.laminates[p]) for p in parts)
            res.checked += 2
            if whole != total:
                res.failures.append({"laminate": lam_name, "whole": [str(x) for x in whole],
                                     "parts": [str(x) for x in total]})
            if (shear(T, first), shear(T, second)) != (want_p, want_q):
                res.failures.append({"laminate": lam_name, "split": [str(x) for x in shear(T, first)] + ["|"] +
                                     [str(x) for x in shear(T, second)], "want": parts})
    res.ok = not res.failures
    return res


def check_doubling(directory=None) -> CheckResult:
    res = CheckResult("doubling", True)
    for name in ("monogon", "sphere_half_half_half", "sphere_half_half_two"):
        cat = load_catalog(name, directory)
        T = cat.triangulation
        for lam_name, partner in cat.expected.get("doubling", {}).items():
            lam = cat.laminates[lam_name]
            doubled = enclose_double(cat.complex, lam)
            base = shear(T, lam)
            got = shear(T, doubled)
            res.checked += 1
            if got != tuple(2 * x for x in base):
                res.failures.append({"catalog": name, "laminate": lam_name, "base": [str(x) for x in base],
                                     "doubled": [str(x) for x in got]})
            if partner is not None:
                res.checked += 1
                if shear(T, cat.laminates[partner]) != got:
                    res.failures.append({"catalog": name, "laminate": lam_name, "partner": partner})
        if name == "monogon":
            L = [cat.laminates["l0"], cat.laminates["r0"]]
            total = [sum(v) for v in zip(*(shear(T, x) for x in L))]
            doubled = [sum(v) for v in zip(*(shear(T, x) for x in double_lamination(cat.complex, L)))]
            res.checked += 1
            if doubled != [2 * x for x in total]:
                res.failures.append({"lamination": ["l0", "r0"], "doubled": [str(x) for x in doubled]})
    res.ok = not res.failures
    return res


def once_punctured_cases(directory=None) -> list:
    """(catalog, name, laminate, triangulation, stated value or None)."""
    from .lamops import make_elementary
    out = []
    for name in ("torus", "sphere_half_half_half", "sphere_half_half_two"):
        cat = load_catalog(name, directory)
        stated = cat.expected.get("sum", {})
        for lam_name, lam in cat.laminates.items():
            out.append((name, lam_name, lam, cat, stated.get(lam_name)))
        for entry in cat.doc.get("elementary", []):
            lam = make_elementary(cat.complex, entry["arc"], entry["tags"])
            out.append((name, f"se({entry['arc']},{'/'.join(entry['tags'])})", lam, cat, None))
    return out


def check_sum_statistic(directory=None) -> CheckResult:
    res = CheckResult("sum-statistic", True)
    for name, lam_name, lam, cat, stated in once_punctured_cases(directory):
        value = sum_statistic(cat.triangulation, shear(cat.triangulation, lam))
        want = predicted_sum(lam)
        res.checked += 1
        if value != want or (stated is not None and Fraction(stated) != want):
            res.failures.append({"catalog": name, "laminate": lam_name, "got": str(value), "predicted": str(want),
                                 "stated": stated})
    res.ok = not res.failures
    return res


def check_duality(directory=None) -> CheckResult:
    from .fan import duality_verify
    res = CheckResult("duality", True)
    doc = load_document("duality_monogon", directory)
    spec = load_bundled_spec(doc["spec"], directory)
    B, _ = assemble_matrix(spec)
    cat = load_catalog(doc["dual_catalog"], directory)
    pairs = [(p["word"], p["index"], cat.laminates[p["laminate"]]) for p in doc["pairs"]]
    for row in duality_verify(B, pairs, cat.triangulation, shear):
        res.checked += 1
        if not row["ok"]:
            res.failures.append(row)
    res.ok = not res.failures
    return res


def check_twist(directory=None) -> CheckResult:
    res = CheckResult("twist", True)
    cat = load_catalog("monogon", directory)
    T = cat.triangulation
    spec = cat.doc.get("twist", {})
    curve = shear(T, cat.laminates[spec["curve"]])
    for entry in spec.get("checks", []):
        fam, off = entry["family"], entry["offset"]
        out = twist_family_check(lambda m: shear(T, cat.family(fam, m + off)), curve, entry["intersections"])
        res.checked += 1
        want_slope = tuple(entry["intersections"] * x for x in curve)
        if out["m_prime"] != entry["m_prime"] or out["slope"] != want_slope:
            res.failures.append({"family": fam, "m_prime": out["m_prime"], "slope": [str(x) for x in out["slope"]]})
    res.ok = not res.failures
    return res


CHECKS: dict = {
    "mutation-trace": check_mutation_trace,
    "seed-trace": check_seed_trace,
    "digon": check_digon,
    "monogon": check_monogon,
    "catalog-rows": check_catalog_rows,
    "additivity": check_additivity,
    "doubling": check_doubling,
    "sum-statistic": check_sum_statistic,
    "duality": check_duality,
    "twist": check_twist,
}


def run_checks(only=None, directory=None) -> list:
    names = list(CHECKS) if not only else list(only)
    out = []
    for name in names:
        fn: Callable = CHECKS[name]
        try:
            out.append(fn(directory))
        except (CatalogError, LaminateError, ShearError, KeyError, ValueError) as exc:
            out.append(CheckResult(name, False, 0, [{"error": f"{type(exc).__name__}: {exc}"}]))
    return out
