"""Graph structure: rotation systems, faces, validation, canonical forms."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charfol import CORNER, ELLIPTIC, EMBRYO, HYPERBOLIC, FoliationGraph, GraphError, build
from charfol import zoo

ZOO_NAMES = sorted(zoo.ZOO)

FROZEN_FACE_COUNTS = {
    "chained_saddles": 2,
    "double_join_cycle": 4,
    "embryo_negative": 2,
    "embryo_positive": 2,
    "overtwisted_loop_negative": 2,
    "overtwisted_loop_positive": 2,
    "three_basin_chain": 4,
    "tight_one_saddle": 2,
    "tight_one_saddle_negative": 2,
    "tight_saddle_connection": 3,
    "trivial": 1,
}


def test_zoo_covers_frozen_table():
    assert set(FROZEN_FACE_COUNTS) == set(ZOO_NAMES)


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_zoo_fixture_is_valid(name):
    g = zoo.example(name)
    assert g.validate() == []
    assert len(g.faces()) == FROZEN_FACE_COUNTS[name]


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_euler_formula_on_fixtures(name):
    g = zoo.example(name)
    assert len(g.points) - len(g.edges) + len(g.faces()) == 2


def test_face_corners_one_source_one_sink():
    g = zoo.example("tight_one_saddle")
    for f in g.faces():
        assert f.source_point in g.points
        assert f.sink_point in g.points
    # both faces of the one-saddle sphere run source -> saddle -> sink
    assert {f.source_point for f in g.faces()} == {"a", "b"}
    assert {f.sink_point for f in g.faces()} == {"z"}


def test_points_of_kind_and_slots():
    g = zoo.example("tight_one_saddle")
    assert [p.id for p in g.points_of_kind(ELLIPTIC)] == ["a", "b", "z"]
    assert [p.id for p in g.points_of_kind(HYPERBOLIC)] == ["h"]
    assert g.points_of_kind(EMBRYO) == []
    assert g.points_of_kind(CORNER) == []
    assert g.edge_at_slot("h", "s0").id == "ea"
    assert g.edge_at_slot("h", "u1").id == "f1"
    with pytest.raises(GraphError):
        g.edge_at_slot("h", "b0")


def test_homoclinic_detection():
    conn = zoo.example("tight_saddle_connection")
    assert conn.homoclinic_edges() == ["conn"]
    assert conn.is_homoclinic("conn")
    assert not conn.is_homoclinic("ea")
    assert zoo.example("tight_one_saddle").homoclinic_edges() == []


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_to_data_round_trip(name):
    g = zoo.example(name)
    h = FoliationGraph.from_data(g.to_data())
    assert h.validate() == []
    assert h.canonical_form() == g.canonical_form()
    assert h.is_isomorphic(g)


@settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(ZOO_NAMES), seed=st.integers(0, 2**30))
def test_canonical_form_is_relabel_invariant(name, seed):
    g = zoo.example(name)
    rng = random.Random(seed)
    pids, eids = sorted(g.points), sorted(g.edges)
    new_p = [f"P{i}" for i in range(len(pids))]
    new_e = [f"E{i}" for i in range(len(eids))]
    rng.shuffle(new_p)
    rng.shuffle(new_e)
    h = g.relabel(dict(zip(pids, new_p)), dict(zip(eids, new_e)))
    assert h.validate() == []
    assert h.canonical_form() == g.canonical_form()
    assert h.is_isomorphic(g)


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_reverse_is_an_involution(name):
    g = zoo.example(name)
    r = g.reverse()
    assert r.validate() == []
    assert r.reverse().canonical_form() == g.canonical_form()


def test_reverse_swaps_roles():
    g = zoo.example("tight_one_saddle")
    r = g.reverse()
    assert r.points["a"].sign == -1  # the source became a sink
    assert r.points["h"].sign == -1
    assert r.edge_at_slot("h", "s0").src.point == "z"


def test_marker_reduce_keeps_the_cellularity_leaf():
    # the trivial sphere needs its marker leaf: without it there is no face
    g = zoo.example("trivial")
    assert sorted(g.marker_reduce().edges) == ["m0"]


def test_validate_reports_missing_rotation():
    g = build(
        points=[("p", "elliptic", 1), ("q", "elliptic", -1)],
        edges=[("m0", "p", None, "q", None, True)],
        rotation={"p": [("m0", "src")]},
    )
    assert any("q" in msg and "missing rotation" in msg for msg in g.validate())


def test_validate_reports_bad_face_corners():
    # two sources joined head-on: the single face has two source corners
    g = build(
        points=[("p", "elliptic", 1), ("q", "elliptic", 1)],
        edges=[("m0", "p", None, "q", None, True)],
        rotation={"p": [("m0", "src")], "q": [("m0", "tgt")]},
    )
    problems = g.validate()
    assert problems, "a source-to-source leaf must not validate"


def test_validate_reports_wrong_euler_count():
    # two disjoint spheres' worth of points on one atlas cannot close up
    g = build(
        points=[
            ("a", "elliptic", 1),
            ("b", "elliptic", 1),
            ("h", "hyperbolic", 1),
            ("z", "elliptic", -1),
        ],
        edges=[
            ("ea", "a", None, "h", "s0"),
            ("eb", "b", None, "h", "s1"),
            ("f0", "h", "u0", "z", None),
            ("f1", "h", "u1", "z", None),
        ],
        rotation={
            "a": [("ea", "src")],
            "b": [("eb", "src")],
            # swapped stable corners: faces no longer alternate
            "h": [("ea", "tgt"), ("eb", "tgt"), ("f0", "src"), ("f1", "src")],
            "z": [("f0", "tgt"), ("f1", "tgt")],
        },
    )
    assert g.validate() != []


def test_validate_reports_unknown_endpoint():
    g = build(
        points=[("p", "elliptic", 1)],
        edges=[("e", "p", None, "ghost", None)],
        rotation={"p": [("e", "src")]},
    )
    assert "edge e: unknown point ghost" in g.validate()
    with pytest.raises(GraphError):
        g.require_valid()


def test_build_rejects_bad_kind():
    with pytest.raises(GraphError):
        build(points=[("p", "parabolic", 1)], edges=[], rotation={"p": []})


def test_without_edge_and_relabel_validate():
    g = zoo.example("tight_one_saddle")
    h = g.without_edge("f1")
    # dropping one unstable separatrix leaves a dangling saddle slot
    assert h.validate() != []
