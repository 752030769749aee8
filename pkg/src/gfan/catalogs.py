"""Bundled example catalogs: surfaces, laminates and expected values."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .laminate import Laminate, end_from_dict, laminate_from_dict, parse_item
from .orbifold import TriangulationSpec, spec_from_dict
from .shear import OrbifoldTriangulation, TaggedTriangulation
from .surface import SurfaceComplex, complex_from_dict


class CatalogError(ValueError):
    pass


@dataclass
class Catalog:
    name: str
    complex: SurfaceComplex
    triangulation: object
    laminates: dict
    families: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    doc: dict = field(default_factory=dict)

    def family(self, name: str, index: int) -> Laminate:
        return family_laminate(self.families[name], index, f"{name}{index}")


def _data_text(name: str, directory: str | None = None) -> str:
    try:
        if directory is not None:
            with open(os.path.join(directory, f"{name}.json")) as fh:
                return fh.read()
        return resources.files("gfan").joinpath("data", f"{name}.json").read_text()
    except FileNotFoundError as exc:
        raise CatalogError(f"no catalog {name!r}") from exc


def bundled_names() -> list:
    return sorted(p.name[:-5] for p in resources.files("gfan").joinpath("data").iterdir()
                  if p.name.endswith(".json"))


def load_document(name: str, directory: str | None = None) -> dict:
    try:
        return json.loads(_data_text(name, directory))
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog {name!r} is not valid JSON: {exc}") from exc


def triangulation_from_dict(cx: SurfaceComplex, doc: dict):
    notched = frozenset(doc.get("notched", ()))
    if doc.get("kind", "tagged") == "orbifold":
        return OrbifoldTriangulation(cx, tuple(doc["arcs"]), dict(doc.get("hat_arcs", {})), notched)
    return TaggedTriangulation(cx, tuple(tuple(p) for p in doc["arcs"]), notched)


def catalog_from_dict(doc: dict) -> Catalog:
    try:
        cx = complex_from_dict(doc["complex"])
        T = triangulation_from_dict(cx, doc["triangulation"])
        lams = {k: laminate_from_dict(v, k) for k, v in doc.get("laminates", {}).items()}
    except KeyError as exc:
        raise CatalogError(f"catalog is missing {exc}") from exc
    return Catalog(doc.get("name", ""), cx, T, lams, doc.get("families", {}), doc.get("expected", {}), doc)


def load_catalog(name_or_path: str, directory: str | None = None) -> Catalog:
    if name_or_path.endswith(".json"):
        with open(name_or_path) as fh:
            return catalog_from_dict(json.load(fh))
    return catalog_from_dict(load_document(name_or_path, directory))


def load_bundled_spec(name: str, directory: str | None = None) -> TriangulationSpec:
    return spec_from_dict(load_document(name, directory))


def family_laminate(template: dict, index: int, name: str = "") -> Laminate:
    """Member ``index`` of a family given by a repeating crossing pattern.

    Non-negative members repeat ``period`` multiplier*index times before
    ``suffix``; member -1-j repeats ``neg_period`` multiplier*j times before
    ``neg_suffix``.
    """
    mult = int(template.get("multiplier", 1))
    if index >= 0:
        word = list(template["period"]) * (mult * index) + list(template["suffix"])
    else:
        word = list(template["neg_period"]) * (mult * (-1 - index)) + list(template["neg_suffix"])
    start, end = (end_from_dict(e) for e in template["ends"])
    return Laminate(tuple(parse_item(x) for x in word), (start, end), name)


def as_fraction_vector(values) -> tuple:
    return tuple(Fraction(str(v)) for v in values)
