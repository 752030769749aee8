import json
from fractions import Fraction

import pytest

from gfan.catalogs import load_bundled_spec, load_catalog, load_document
from gfan.fan import (CacheMismatch, Cone, FanError, SingularCone, atlas_to_dict, cone_contains, coverage_estimate,
                      covered, duality_verify, explore, explore_cached, fan_overlap_check, halfspace_verify, lcg_rays,
                      membership_counts)
from gfan.orbifold import assemble_matrix, halfspace_functional
from gfan.shear import shear

from conftest import B_EXAMPLE, MARKOV

A2 = ((0, 1), (-1, 0))


def test_depth_zero_is_identity():
    atlas = explore(B_EXAMPLE, 0)
    assert len(atlas) == 1
    assert atlas.nodes[0].g_vectors == ((1, 0), (0, 1))
    assert atlas.nodes[0].word == ()


def test_example_g_vectors_reached():
    gs = set(explore(B_EXAMPLE, 3).all_g_vectors())
    assert {(1, -1), (3, -4), (2, -3)} <= gs


def test_finite_type_closes():
    atlas = explore(A2, 10)
    assert len(atlas) == 5
    assert atlas.complete
    assert not explore(B_EXAMPLE, 10).complete


def test_words_replay_to_their_g_vectors():
    from gfan.mutation import g_vectors, initial_seed, mutate_word
    start = initial_seed(B_EXAMPLE)
    for node in explore(B_EXAMPLE, 5).nodes:
        assert g_vectors(mutate_word(start, node.word)) == node.g_vectors


@pytest.mark.parametrize("B", [B_EXAMPLE, MARKOV, ((0, 2, -1), (-2, 0, 1), (4, -4, 0))])
def test_degree_and_laurent_modes_agree(B):
    fast = explore(B, 4, mode="degree")
    slow = explore(B, 4, mode="laurent")
    assert [(n.key, n.word) for n in fast.nodes] == [(n.key, n.word) for n in slow.nodes]


def test_unknown_mode_and_negative_depth():
    with pytest.raises(FanError):
        explore(B_EXAMPLE, 2, mode="fast")
    with pytest.raises(FanError):
        explore(B_EXAMPLE, -1)


def test_adjacent_clusters_share_all_but_one():
    atlas = explore(MARKOV, 3)
    from gfan.fan import child
    for node in atlas.nodes[:20]:
        for k in (1, 2, 3):
            other = child(node, atlas.matrix, k)
            assert len(set(node.g_vectors) & set(other.g_vectors)) == 2


def test_cone_membership():
    cone = Cone([(1, -1), (2, -3)])
    assert not cone_contains(cone, (1, -2))
    assert cone_contains(cone, (3, -4))
    assert cone_contains(cone, (1, -1))
    assert cone.coefficients((3, -4)) == (Fraction(1), Fraction(1))
    with pytest.raises(SingularCone):
        cone_contains(Cone([(1, 2), (2, 4)]), (1, 2))
    with pytest.raises(FanError):
        cone_contains(cone, (1, 2, 3))


def test_orthants_cover_everything():
    from gfan.fan import FanAtlas, root_node
    base = root_node(((0, 0), (0, 0)))
    nodes = []
    for sx in (1, -1):
        for sy in (1, -1):
            gs = ((sx, 0), (0, sy))
            nodes.append(type(base)((sx, sy), gs, base.matrix, 0, ()))
    atlas = FanAtlas(((0, 0), (0, 0)), 0, nodes)
    assert coverage_estimate(atlas, 500, 3)["coverage"] == 1.0


def test_lcg_rays_deterministic_and_nonzero():
    rays = lcg_rays(1000, 3, 7)
    assert rays == lcg_rays(1000, 3, 7)
    assert rays != lcg_rays(1000, 3, 8)
    assert all(any(r) and all(-100 <= x <= 100 for x in r) for r in rays)
    # first step from seed 0 by hand
    state = 1442695040888963407
    assert lcg_rays(1, 1, 0) == [((state >> 33) % 201 - 100,)]


def test_membership_backends_agree(monkeypatch):
    atlas = explore(B_EXAMPLE, 8)
    rays = lcg_rays(2000, 2, 11)
    fast = membership_counts(atlas, rays)
    from gfan import fan
    dets, adjs = fan._membership_tables(atlas)
    assert fast == fan._count_exact(adjs, dets, rays)
    assert [c > 0 for c in fast[:200]] == [covered(atlas, r) for r in rays[:200]]


def test_coverage_example():
    deepest = explore(B_EXAMPLE, 20)
    values = []
    for d in (5, 10, 20):
        rep = coverage_estimate(deepest.truncated(d), 10000, 7, [(1, -2)])
        values.append(rep["coverage"])
        assert rep["probes"] == [{"ray": [1, -2], "covered": False}]
    assert values == sorted(values)
    assert values[-1] >= 0.99


def test_truncation_matches_fresh_exploration():
    deep = explore(B_EXAMPLE, 12)
    for d in (0, 3, 7):
        assert [n.key for n in deep.truncated(d).nodes] == [n.key for n in explore(B_EXAMPLE, d).nodes]


def test_no_overlaps():
    assert fan_overlap_check(explore(B_EXAMPLE, 10), 1000, 7) == []
    assert fan_overlap_check(explore(MARKOV, 4), 1000, 7) == []


@pytest.mark.parametrize("name", ["torus_spec", "sphere_half_half_half_spec"])
def test_halfspace_holds(name):
    spec = load_bundled_spec(name)
    B, _ = assemble_matrix(spec)
    rep = halfspace_verify(explore(B, 6), halfspace_functional(spec))
    assert rep["violations"] == []


def test_halfspace_exceptional_sphere_readings():
    spec = load_bundled_spec("sphere_half_half_two_spec")
    B, _ = assemble_matrix(spec)
    atlas = explore(B, 6)
    stated = halfspace_verify(atlas, halfspace_functional(spec))
    assert len(stated["violations"]) == 89
    assert stated["minimum"] == "-35/2"
    assert stated["argmin"] == [4, 9, -24]
    assert halfspace_verify(atlas, halfspace_functional(spec, dual=True))["violations"] == []


def test_halfspace_length_mismatch():
    with pytest.raises(FanError):
        halfspace_verify(explore(B_EXAMPLE, 1), (1, 1, 1))


def test_duality_pairs():
    doc = load_document("duality_monogon")
    B, _ = assemble_matrix(load_bundled_spec(doc["spec"]))
    cat = load_catalog(doc["dual_catalog"])
    pairs = [(p["word"], p["index"], cat.laminates[p["laminate"]]) for p in doc["pairs"]]
    rows = duality_verify(B, pairs, cat.triangulation, shear)
    assert len(rows) == 5 and all(r["ok"] for r in rows)
    assert [tuple(r["g"]) for r in rows] == [(1, 0), (0, 1), (1, -1), (3, -4), (2, -3)]


def test_cache_round_trip(tmp_path):
    path = str(tmp_path / "atlas.json")
    first = explore_cached(B_EXAMPLE, 4, path)
    assert json.loads(open(path).read()) == atlas_to_dict(first)
    again = explore_cached(B_EXAMPLE, 4, path)
    assert [n.key for n in again.nodes] == [n.key for n in first.nodes]
    shallow = explore_cached(B_EXAMPLE, 2, path)
    assert [n.key for n in shallow.nodes] == [n.key for n in explore(B_EXAMPLE, 2).nodes]
    deeper = explore_cached(B_EXAMPLE, 7, path)
    assert [(n.key, n.word) for n in deeper.nodes] == [(n.key, n.word) for n in explore(B_EXAMPLE, 7).nodes]


def test_cache_mismatch(tmp_path):
    path = str(tmp_path / "atlas.json")
    explore_cached(B_EXAMPLE, 2, path)
    with pytest.raises(CacheMismatch):
        explore_cached(A2, 2, path)
    doc = json.loads(open(path).read())
    doc["version"] = 999
    open(path, "w").write(json.dumps(doc))
    with pytest.raises(CacheMismatch):
        explore_cached(B_EXAMPLE, 2, path)
    open(path, "w").write("{not json")
    with pytest.raises(CacheMismatch):
        explore_cached(B_EXAMPLE, 2, path)


def test_thread_count_does_not_change_result(monkeypatch):
    one = explore(MARKOV, 5, threads=1)
    many = explore(MARKOV, 5, threads=8)
    assert [(n.key, n.word) for n in one.nodes] == [(n.key, n.word) for n in many.nodes]
    monkeypatch.setenv("GFAN_THREADS", "0")
    with pytest.raises(FanError):
        explore(MARKOV, 1)
