"""Command-line entry point ``gfan``.

Exit codes: 0 ok, 1 verification failure, 2 unreadable or invalid input,
3 arithmetic invariant breach, 4 atlas cache mismatch.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

import click

from . import catalogs, fan, verify
from .algebra import AlgebraError, PolyParseError, to_string
from .laminate import LaminateError, LaminateParseError
from .lamops import twist_family_check
from .mutation import (MutationError, NotSkewSymmetrizable, as_matrix, find_symmetrizer, g_vectors, initial_seed,
                       mutate_matrix, mutate_seed, principal_extension)
from .orbifold import (OrbifoldError, SpecError, SymmetrizerMismatch, TriangulationSpec, assemble_matrix,
                       halfspace_functional, spec_from_dict)
from .shear import ShearError, shear

EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_CACHE = 4


class InputError(click.ClickException):
    exit_code = EXIT_PARSE


class InvariantBreach(click.ClickException):
    exit_code = EXIT_INVARIANT


class CacheError(click.ClickException):
    exit_code = EXIT_CACHE


def _fail(exc: Exception):
    """Map a library error onto the matching exit code."""
    msg = f"{type(exc).__name__}: {exc}"
    if isinstance(exc, fan.CacheMismatch):
        raise CacheError(msg)
    if isinstance(exc, (PolyParseError, LaminateParseError, SpecError, catalogs.CatalogError, NotSkewSymmetrizable,
                        json.JSONDecodeError, OSError, KeyError, IndexError, TypeError, ValueError)):
        raise InputError(msg)
    if isinstance(exc, (AlgebraError, MutationError, ShearError, SymmetrizerMismatch, fan.SingularCone)):
        raise InvariantBreach(msg)
    if isinstance(exc, (OrbifoldError, LaminateError, fan.FanError)):
        raise InputError(msg)
    raise exc


# input documents

def _read_document(source: str):
    """A JSON file path, or the name of a bundled data file."""
    if os.path.exists(source):
        with open(source) as fh:
            return json.load(fh)
    return catalogs.load_document(source)


def _matrix_input(source: str) -> tuple:
    """(B, spec or None) from a matrix document or a triangulation document.

    Matrix documents look like {"n": 2, "B": [[0,-1],[4,0]]}; a bare list
    of rows is accepted too.
    """
    doc = _read_document(source)
    if isinstance(doc, dict) and "triangles" in doc:
        spec = spec_from_dict(doc)
        return assemble_matrix(spec)[0], spec
    rows = doc.get("B", doc.get("matrix")) if isinstance(doc, dict) else doc
    if not isinstance(rows, list):
        raise SpecError(f"{source}: expected an object with 'B' or a list of rows")
    B = as_matrix(rows)
    if isinstance(doc, dict) and "n" in doc and doc["n"] != len(B):
        raise SpecError(f"{source}: n={doc['n']} but B has {len(B)} rows")
    find_symmetrizer(B)
    return B, None


def _functional(doc_source: str, spec: TriangulationSpec | None, given: str | None, dual: bool) -> tuple:
    if given:
        return tuple(Fraction(x) for x in given.split(","))
    if spec is not None:
        return halfspace_functional(spec, dual=dual)
    doc = _read_document(doc_source)
    if isinstance(doc, dict) and "functional" in doc:
        return tuple(Fraction(str(x)) for x in doc["functional"])
    raise SpecError("a bare matrix needs --functional or a 'functional' field")


def _ray(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"ray {text!r} is not a comma-separated integer vector") from None


# output

def _vec(v) -> str:
    return ";".join(str(x) for x in v)


def _csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        directory = os.path.dirname(os.path.abspath(output))
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, output)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        click.echo(text, nl=False)


def _json(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


FORMAT = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
OUTPUT = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                      help="Write the report here instead of stdout.")
CACHE = click.option("--cache", type=click.Path(dir_okay=False), default=None,
                     help="Atlas cache file; reused when the matrix matches.")


@click.group()
@click.version_option(package_name="gfan")
def main():
    """Exact cluster mutation, shear coordinates and g-vector fan checks."""


@main.command()
@click.argument("matrix_file")
@click.argument("word", nargs=-1, type=int)
@click.option("--seed-trace", is_flag=True, help="Also print cluster variables and g-vectors.")
@FORMAT
@OUTPUT
def mutate(matrix_file, word, seed_trace, fmt, output):
    """Apply mutations WORD (1-based) to the principal extension of B."""
    try:
        B, _ = _matrix_input(matrix_file)
        A = principal_extension(B)
        s = initial_seed(B) if seed_trace else None
        steps = [{"step": 0, "index": None, "matrix": [list(r) for r in A]}]
        if s is not None:
            steps[0].update(cluster=[to_string(x) for x in s.cluster], g_vectors=[list(g) for g in g_vectors(s)])
        for i, k in enumerate(word, 1):
            A = mutate_matrix(A, k)
            entry = {"step": i, "index": k, "matrix": [list(r) for r in A]}
            if s is not None:
                s = mutate_seed(s, k)
                entry.update(cluster=[to_string(x) for x in s.cluster], g_vectors=[list(g) for g in g_vectors(s)])
            steps.append(entry)
    except Exception as exc:
        _fail(exc)
    if fmt == "json":
        text = _json({"matrix": [list(r) for r in B], "word": list(word), "steps": steps})
    else:
        rows = []
        for e in steps:
            for r, row in enumerate(e["matrix"], 1):
                rows.append([e["step"], e["index"] or "", "row", r, _vec(row)])
            for key in ("cluster", "g_vectors"):
                for j, val in enumerate(e.get(key, ()), 1):
                    rows.append([e["step"], e["index"] or "", key, j, val if key == "cluster" else _vec(val)])
        text = _csv(["step", "index", "kind", "position", "value"], rows)
    _emit(text, output)


def _atlas(matrix_file: str, depth: int, cache: str | None):
    B, spec = _matrix_input(matrix_file)
    return fan.explore_cached(B, depth, cache), spec


@main.command()
@click.argument("matrix_file")
@click.option("--depth", type=click.IntRange(min=0), default=3, show_default=True)
@CACHE
@FORMAT
@OUTPUT
def explore(matrix_file, depth, cache, fmt, output):
    """Breadth-first exchange-graph exploration; lists every cluster's g-vectors."""
    try:
        atlas, _ = _atlas(matrix_file, depth, cache)
    except Exception as exc:
        _fail(exc)
    if fmt == "json":
        text = _json({
            "matrix": [list(r) for r in atlas.matrix],
            "depth": atlas.depth,
            "complete": atlas.complete,
            "nodes": len(atlas),
            "g_vectors": [list(g) for g in atlas.all_g_vectors()],
            "clusters": [{"depth": nd.depth, "word": list(nd.word), "g_vectors": [list(g) for g in nd.g_vectors]}
                         for nd in atlas.nodes],
        })
    else:
        n = atlas.n
        rows = [[nd.depth, _vec(nd.word)] + [_vec(g) for g in nd.g_vectors] for nd in atlas.nodes]
        text = _csv(["depth", "word"] + [f"g{i}" for i in range(1, n + 1)], rows)
    _emit(text, output)


@main.command()
@click.argument("matrix_file")
@click.option("--depth", type=click.IntRange(min=0), multiple=True, default=(10,), show_default=True,
              help="Repeat for several depths; one report per depth.")
@click.option("--samples", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--probe", multiple=True, help="Comma-separated ray to test exactly, e.g. 1,-2.")
@CACHE
@FORMAT
@OUTPUT
def coverage(matrix_file, depth, samples, seed, probe, cache, fmt, output):
    """Fraction of seeded random integer rays inside the explored cones."""
    probes = [_ray(p) for p in probe]
    try:
        B, _ = _matrix_input(matrix_file)
        for p in probes:
            if len(p) != len(B):
                raise SpecError(f"probe {list(p)} has length {len(p)}, rank is {len(B)}")
        deepest = fan.explore_cached(B, max(depth), cache)
        reports = [fan.coverage_estimate(deepest.truncated(d), samples, seed, probes) for d in depth]
    except Exception as exc:
        _fail(exc)
    if fmt == "json":
        text = _json(reports if len(reports) > 1 else reports[0])
    else:
        header = ["depth", "samples", "seed", "cones", "covered", "coverage"] + [f"probe {_vec(p)}" for p in probes]
        rows = [[r["depth"], r["samples"], r["seed"], r["cones"], r["covered"], repr(r["coverage"])]
                + ["covered" if p["covered"] else "uncovered" for p in r.get("probes", ())] for r in reports]
        text = _csv(header, rows)
    _emit(text, output)


@main.command()
@click.argument("input_file")
@click.option("--depth", type=click.IntRange(min=0), default=6, show_default=True)
@click.option("--functional", default=None, help="Comma-separated coefficients overriding the derived functional.")
@click.option("--dual", is_flag=True, help="Put the 1/2 coefficients on weight-2 pending arcs instead.")
@CACHE
@FORMAT
@OUTPUT
def halfspace(input_file, depth, functional, dual, cache, fmt, output):
    """Count g-vectors with f(g) < 0 for the half-space functional f."""
    try:
        atlas, spec = _atlas(input_file, depth, cache)
        f = _functional(input_file, spec, functional, dual)
        report = fan.halfspace_verify(atlas, f)
    except Exception as exc:
        _fail(exc)
    if fmt == "json":
        text = _json(report)
    else:
        text = _csv(["depth", "nodes", "g_vectors", "functional", "minimum", "argmin", "violations"],
                    [[report["depth"], report["nodes"], report["g_vectors"], _vec(report["functional"]),
                      report["minimum"], _vec(report["argmin"] or ()), len(report["violations"])]])
    _emit(text, output)
    click.echo(f"violations: {len(report['violations'])}", err=True)


@main.command("shear")
@click.argument("catalog")
@click.argument("laminates", nargs=-1)
@FORMAT
@OUTPUT
def shear_cmd(catalog, laminates, fmt, output):
    """Shear coordinates of laminates in a catalog (all of them by default)."""
    try:
        cat = catalogs.load_catalog(catalog)
        names = list(laminates) or list(cat.laminates)
        rows = []
        for name in names:
            if name not in cat.laminates:
                raise catalogs.CatalogError(f"catalog {cat.name!r} has no laminate {name!r}")
            rows.append((name, shear(cat.triangulation, cat.laminates[name])))
    except Exception as exc:
        _fail(exc)
    labels = list(getattr(cat.triangulation, "labels", None) or cat.triangulation.arcs)
    if fmt == "json":
        text = _json({"catalog": cat.name, "arcs": labels,
                      "shear": {name: [str(x) for x in v] for name, v in rows}})
    else:
        text = _csv(["laminate", "shear"], [[name, _vec(v)] for name, v in rows])
    _emit(text, output)


@main.command()
@click.argument("spec_file")
@FORMAT
@OUTPUT
def assemble(spec_file, fmt, output):
    """Exchange matrix of a triangulation document, glued from triangle blocks."""
    try:
        doc = _read_document(spec_file)
        spec = spec_from_dict(doc)
        B, d = assemble_matrix(spec)
    except Exception as exc:
        _fail(exc)
    labels = [a.id for a in spec.interior_arcs()]
    if fmt == "json":
        text = _json({"arcs": labels, "symmetrizer": [str(x) for x in d], "matrix": [list(r) for r in B]})
    else:
        text = _csv(["arc", "symmetrizer", "row"], [[a, str(w), _vec(r)] for a, w, r in zip(labels, d, B)])
    _emit(text, output)


@main.command("twist-check")
@click.argument("catalog")
@click.option("--family", default=None, help="Family name; defaults to every family listed in the catalog.")
@click.option("--cap", type=click.IntRange(min=1), default=8, show_default=True)
@FORMAT
@OUTPUT
def twist_check(catalog, family, cap, fmt, output):
    """Eventual linearity of shear vectors along a twist family."""
    try:
        cat = catalogs.load_catalog(catalog)
        spec = cat.doc.get("twist")
        if not spec:
            raise catalogs.CatalogError(f"catalog {cat.name!r} lists no twist families")
        T = cat.triangulation
        curve = shear(T, cat.laminates[spec["curve"]])
        rows = []
        for entry in spec["checks"]:
            if family and entry["family"] != family:
                continue
            fam, off = entry["family"], entry["offset"]
            out = twist_family_check(lambda m: shear(T, cat.family(fam, m + off)), curve, entry["intersections"], cap)
            rows.append({"family": fam, "curve": spec["curve"], "intersections": entry["intersections"],
                         "m_prime": out["m_prime"], "slope": [str(x) for x in out["slope"]],
                         "verified": out["verified"]})
        if family and not rows:
            raise catalogs.CatalogError(f"catalog {cat.name!r} has no twist family {family!r}")
    except Exception as exc:
        _fail(exc)
    if fmt == "json":
        text = _json(rows)
    else:
        text = _csv(["family", "curve", "intersections", "m_prime", "slope", "verified"],
                    [[r["family"], r["curve"], r["intersections"], r["m_prime"], _vec(r["slope"]), r["verified"]]
                     for r in rows])
    _emit(text, output)


@main.command("verify")
@click.option("--only", multiple=True, type=click.Choice(list(verify.CHECKS)), help="Run just these checks.")
@click.option("--catalog-dir", type=click.Path(file_okay=False, exists=True), default=None,
              help="Read catalogs from this directory instead of the bundled ones.")
@FORMAT
def verify_cmd(only, catalog_dir, fmt):
    """Run the bundled worked-example suite."""
    results = verify.run_checks(only, catalog_dir)
    if fmt == "json":
        text = _json([r.to_dict() for r in results])
    else:
        text = _csv(["check", "ok", "checked", "failures"],
                    [[r.name, r.ok, r.checked, len(r.failures)] for r in results])
    _emit(text, None)
    failed = [r.name for r in results if not r.ok]
    if failed:
        click.echo(f"failed: {', '.join(failed)}", err=True)
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    main()
