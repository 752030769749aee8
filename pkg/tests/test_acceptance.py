"""Acceptance suite: one PASS/FAIL line per criterion, then the assertion.

Lines are written straight to the terminal so they show up in a plain
``pytest -v`` run.
"""
import os
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from gfan.algebra import parse_poly, poly_div_exact
from gfan.catalogs import load_bundled_spec, load_catalog
from gfan.fan import coverage_estimate, explore, halfspace_verify
from gfan.lamops import enclose_double, predicted_sum, split_exceptional, sum_statistic, twist_family_check
from gfan.mutation import g_vectors, initial_seed, mutate_matrix, mutate_seed, principal_extension
from gfan.orbifold import CATALOG, TriangleDescriptor, assemble_matrix, halfspace_functional, triangle_matrix
from gfan.shear import shear
from gfan import verify

B = ((0, -1), (4, 0))
WORD = (2, 1, 2)


def report(capsys, number, title, ok, detail=""):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {number}: {title} {detail}"


def best_time(fn, repeats=5):
    best = None
    for _ in range(repeats):
        t = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return out, best


def test_criterion_01_matrix_trace(capsys):
    want = [((0, -1), (4, 0), (1, 0), (0, 1)), ((0, 1), (-4, 0), (1, 0), (4, -1)),
            ((0, -1), (4, 0), (-1, 1), (-4, 3)), ((0, 1), (-4, 0), (3, -1), (8, -3))]

    def run():
        A = principal_extension(B)
        out = [A]
        for k in WORD:
            A = mutate_matrix(A, k)
            out.append(A)
        return out

    got, dt = best_time(run)
    ok = got == want and dt < 1e-3
    report(capsys, 1, "matrix-mutation trace", ok, f"{dt * 1e3:.3f} ms")


def test_criterion_02_seed_trace(capsys):
    def poly(num, den):
        n = parse_poly(num, 2)
        return poly_div_exact(n, parse_poly(den, 2))

    s1 = parse_poly("x1 + y2", 2)
    want_vars = [
        poly("x1 + y2", "x2"),
        poly_div_exact(s1 ** 4 + parse_poly("y1*y2^4*x2^4", 2), parse_poly("x1*x2^4", 2)),
        poly_div_exact(s1 ** 3 + parse_poly("y1*y2^3*x2^4", 2), parse_poly("x1*x2^3", 2)),
    ]
    want_g = [(1, -1), (3, -4), (2, -3)]

    def run():
        s = initial_seed(B)
        out = []
        for k in WORD:
            s = mutate_seed(s, k)
            out.append((s.cluster[k - 1], g_vectors(s)[k - 1]))
        return out

    got, dt = best_time(run)
    ok = [x for x, _ in got] == want_vars and [g for _, g in got] == want_g and dt < 1e-2
    report(capsys, 2, "seed trace", ok, f"{dt * 1e3:.3f} ms")


def test_criterion_03_digon_table(capsys):
    table = {"l1": (0, -1), "l2": (-1, -1), "l3": (-1, 0), "l4": (0, 1), "l5": (1, 1), "l6": (1, 0)}
    cat = load_catalog("digon")
    got = {name: tuple(shear(cat.triangulation, cat.laminates[name])) for name in table}
    entries = sum(len(v) for v in table.values())
    matching = sum(a == b for n in table for a, b in zip(got[n], table[n]))
    report(capsys, 3, "digon shear table", entries == 12 and matching == 12, f"{matching}/12 entries")


def test_criterion_04_monogon(capsys):
    cat = load_catalog("monogon")
    T = cat.triangulation

    def b(name):
        return tuple(shear(T, cat.laminates[name]))

    c = b("c")
    checks = [c == (-1, 2), b("r-1") == (0, 1), b("r0") == (0, -1), b("l-1") == (1, 0), b("l0") == (-1, 0)]
    for i in range(1, 5):
        checks.append(b(f"r{i}") == tuple(r + i * x for r, x in zip(b("r0"), c)))
        checks.append(b(f"l{i}") == tuple(l + 2 * i * x for l, x in zip(b("l0"), c)))
    for i in range(-4, 5):
        checks.append(b(f"r{i}'") == tuple(2 * x for x in b(f"r{i}")))
    report(capsys, 4, "monogon shear data", all(checks), f"{sum(checks)}/{len(checks)} identities")


def test_criterion_05_catalog_rows(capsys):
    from test_orbifold import GOLDEN, _latex
    bad = []
    for kind, weights, table in GOLDEN:
        M = _latex(table)
        sides = tuple(str(i + 1) for i in range(len(M)))
        local = triangle_matrix(TriangleDescriptor(kind, sides, tuple(Fraction(w) for w in weights)))
        if any(local.get((si, sj), 0) != M[i][j] for i, si in enumerate(sides) for j, sj in enumerate(sides)):
            bad.append((kind, weights))
    rows = sum(len(v) for v in CATALOG.values())
    monogon, _ = assemble_matrix(load_bundled_spec("monogon_spec"))
    ok = not bad and len(GOLDEN) == rows and monogon == B
    report(capsys, 5, "catalog rows and monogon assembly", ok, f"{len(GOLDEN) - len(bad)}/{rows} rows")


def test_criterion_06_additivity(capsys):
    checks = []
    digon = load_catalog("digon")
    for name in ("l2", "l5"):
        first, second = split_exceptional(digon.complex, digon.laminates[name])
        whole = shear(digon.triangulation, digon.laminates[name])
        parts = [shear(digon.triangulation, x) for x in (first, second)]
        checks.append(whole == tuple(p + q for p, q in zip(*parts)))
    mono = load_catalog("monogon")
    r0 = mono.laminates["r0"]
    doubled = shear(mono.triangulation, enclose_double(mono.complex, r0))
    checks.append(doubled == tuple(2 * x for x in shear(mono.triangulation, r0)))
    checks.append(doubled == shear(mono.triangulation, mono.laminates["r0'"]))
    sphere = load_catalog("sphere_half_half_half")
    s12 = sphere.laminates["s12"]
    checks.append(shear(sphere.triangulation, enclose_double(sphere.complex, s12))
                  == tuple(2 * x for x in shear(sphere.triangulation, s12)))
    report(capsys, 6, "additivity and doubling", all(checks), f"{sum(checks)}/{len(checks)} identities")


def test_criterion_07_duality(capsys):
    result = verify.check_duality()
    report(capsys, 7, "duality pairs", result.ok and result.checked == 5, f"{result.checked} pairs")


def test_criterion_08_twist(capsys):
    cat = load_catalog("monogon")
    T = cat.triangulation
    c = shear(T, cat.laminates["c"])
    got = {}
    for fam, k in (("l", 2), ("r", 1)):
        out = twist_family_check(lambda m: shear(T, cat.family(fam, m - 1)), c, k)
        got[fam] = (out["m_prime"], out["slope"])
    ok = got["l"] == (1, tuple(2 * x for x in c)) and got["r"][1] == tuple(c)
    report(capsys, 8, "twist linearity", ok, f"l: m'={got['l'][0]}, r: m'={got['r'][0]}")


def test_criterion_09_sum_statistic(capsys):
    allowed = {Fraction(v) for v in (-1, 1, 0, Fraction(-1, 2), Fraction(1, 2))}
    cases = verify.once_punctured_cases()
    bad = []
    for name, lam_name, lam, cat, stated in cases:
        value = sum_statistic(cat.triangulation, shear(cat.triangulation, lam))
        want = predicted_sum(lam)
        if value != want or want not in allowed or (stated is not None and Fraction(stated) != want):
            bad.append((name, lam_name, value, want))
    report(capsys, 9, "sum statistic", not bad, f"{len(cases) - len(bad)}/{len(cases)} laminates")


HALFSPACE_CASES = ["torus_spec", "sphere_half_half_half_spec", "sphere_half_half_two_spec"]


def test_criterion_10_halfspace(capsys):
    parts, ok = [], True
    for name in HALFSPACE_CASES:
        spec = load_bundled_spec(name)
        B_T, _ = assemble_matrix(spec)
        t = time.perf_counter()
        atlas = explore(B_T, 6)
        rep = halfspace_verify(atlas, halfspace_functional(spec))
        dt = time.perf_counter() - t
        part = f"{name.removesuffix('_spec')}: {len(rep['violations'])} violations in {dt:.1f} s"
        if rep["violations"]:
            dual = halfspace_verify(atlas, halfspace_functional(spec, dual=True))
            part += (f", min {rep['minimum']} at {rep['argmin']}"
                     f"; with 1/2 on the weight-2 arcs instead: {len(dual['violations'])} violations")
        ok = ok and not rep["violations"] and dt < 30
        parts.append(part)
    report(capsys, 10, "half-space property", ok, "; ".join(parts))


def test_criterion_11_denseness(capsys):
    t = time.perf_counter()
    deepest = explore(B, 20)
    reports = [coverage_estimate(deepest.truncated(d), 10000, 7, [(1, -2)]) for d in (5, 10, 20)]
    dt = time.perf_counter() - t
    values = [r["coverage"] for r in reports]
    probe_uncovered = all(not r["probes"][0]["covered"] for r in reports)
    ok = values == sorted(values) and values[-1] >= 0.99 and probe_uncovered and dt < 60
    report(capsys, 11, "denseness", ok, "coverage " + "/".join(f"{v:.4f}" for v in values) + f", {dt:.1f} s")


def test_criterion_12_structural(capsys):
    import test_properties as props
    trials = [props.test_matrix_mutation_involution, props.test_symmetrizer_preserved,
              props.test_laurent_and_homogeneous, props.test_seed_involution, props.test_orbifold_shear_integral]
    failures = []
    for fn in trials:
        try:
            fn()
        except Exception as exc:
            failures.append(f"{fn.__name__}: {type(exc).__name__}")
    commands = [["explore", "torus_spec", "--depth", "5"],
                ["coverage", "monogon_spec", "--depth", "5", "--depth", "10"],
                ["halfspace", "sphere_half_half_half_spec", "--format", "csv"],
                ["shear", "sphere_half_half_two"],
                ["mutate", "monogon_spec", "2", "1", "2", "--seed-trace"]]
    for args in commands:
        outs = set()
        for threads in ("1", "4", "16"):
            env = dict(os.environ, GFAN_THREADS=threads)
            proc = subprocess.run([sys.executable, "-m", "gfan.cli", *args], capture_output=True, env=env)
            outs.add((proc.returncode, proc.stdout))
        if len(outs) != 1:
            failures.append(f"gfan {args[0]} output depends on GFAN_THREADS")
    detail = f"{len(trials)} properties x 1000 trials, {len(commands)} commands x 3 thread counts"
    report(capsys, 12, "structural invariants and determinism", not failures,
           detail if not failures else "; ".join(failures))
