"""Surplus counts, transverse regions, polygons, skeleton, positive tree."""

from fractions import Fraction

import pytest

from charfol import ELLIPTIC, GraphError
from charfol import zoo
from charfol.invariants import (
    Region,
    enumerate_polygons,
    find_same_sign_polygon,
    point_surplus,
    positive_tree,
    skeleton_decomposition,
    trace_polygon,
    unique_positive_path,
)

ZOO_NAMES = sorted(zoo.ZOO)

FROZEN_SURPLUS = {
    "chained_saddles": (0, 2),
    "double_join_cycle": (0, 2),
    "embryo_negative": (1, 1),
    "embryo_positive": (1, 1),
    "overtwisted_loop_negative": (2, 0),
    "overtwisted_loop_positive": (0, 2),
    "three_basin_chain": (1, 1),
    "tight_one_saddle": (1, 1),
    "tight_one_saddle_negative": (1, 1),
    "tight_saddle_connection": (1, 1),
    "trivial": (1, 1),
}


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_point_surplus_frozen(name):
    assert point_surplus(zoo.example(name)) == FROZEN_SURPLUS[name]


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_surplus_components_sum_to_two(name):
    dp, dm = point_surplus(zoo.example(name))
    assert dp + dm == 2


def test_surplus_flips_under_reversal():
    g = zoo.example("overtwisted_loop_positive")
    dp, dm = point_surplus(g)
    assert point_surplus(g.reverse()) == (dm, dp)


# ------------------------------------------------------------------ regions


def test_region_below_a_negative_saddle_is_an_annulus():
    g = zoo.example("tight_one_saddle_negative")
    region = Region(g, {"p", "h"})
    assert region.is_valid
    assert region.surplus() == (1, -1)
    assert region.component_count() == 1
    assert len(region.boundary_circles()) == 2
    assert region.euler_characteristic() == 0
    report = region.analysis()
    assert report["euler_consistent"]
    assert report["cut_edges"] == ["k0", "k1"]


def test_region_single_source_is_a_disc():
    g = zoo.example("tight_one_saddle")
    region = Region(g, {"a"})
    assert region.is_valid
    assert len(region.boundary_circles()) == 1
    assert region.euler_characteristic() == 1
    assert region.circle_of_edge("ea") == 0
    with pytest.raises(GraphError):
        region.circle_of_edge("eb")


def test_region_rejects_inward_flow():
    g = zoo.example("tight_one_saddle")
    # the sink pulls every separatrix inward: not a transverse exit boundary
    region = Region(g, {"z"})
    problems = region.validate()
    assert any("points into the region" in p for p in problems)
    with pytest.raises(GraphError):
        region.boundary_circles()


def test_region_rejects_unknown_points():
    with pytest.raises(GraphError):
        Region(zoo.example("trivial"), {"nope"})


def test_boundary_circle_key_is_rotation_invariant():
    g = zoo.example("tight_one_saddle_negative")
    region = Region(g, {"p", "h"})
    for circle in region.boundary_circles():
        items = circle.items
        rotated = type(circle)(items[2:] + items[:2])
        assert rotated.key() == circle.key()


# ----------------------------------------------------------------- polygons


def test_no_polygon_on_tight_fixture():
    assert find_same_sign_polygon(zoo.example("tight_one_saddle")) is None
    assert find_same_sign_polygon(zoo.example("trivial")) is None


def test_positive_loop_carries_an_all_positive_monogon():
    g = zoo.example("overtwisted_loop_positive")
    poly = find_same_sign_polygon(g)
    assert poly is not None
    assert poly.same_sign and poly.sign == 1
    assert poly.embedded
    assert poly.sides == 1
    assert sorted(poly.face_indices) == [0]
    # the saddle sits inside the side as a pseudovertex
    roles = {c.point: c.role for c in poly.corners}
    assert roles == {"p": "vertex", "h": "pseudovertex"}


def test_negative_loop_polygon_has_opposite_sign():
    poly = find_same_sign_polygon(zoo.example("overtwisted_loop_negative"))
    assert poly is not None and poly.sign == -1 and poly.embedded


def test_double_join_cycle_polygon():
    g = zoo.example("double_join_cycle")
    poly = find_same_sign_polygon(g)
    assert poly is not None
    assert poly.sign == 1 and poly.embedded
    assert sorted(poly.face_indices) == [0, 3]
    assert poly.sides == 2


def test_trace_polygon_rejects_non_disc_unions():
    g = zoo.example("double_join_cycle")
    all_faces = frozenset(f.index for f in g.faces())
    assert trace_polygon(g, all_faces) is None  # the whole sphere is not a disc


def test_enumerate_polygons_sees_both_signs_only_where_present():
    g = zoo.example("tight_one_saddle")
    signs = {p.sign for p in enumerate_polygons(g) if p.same_sign}
    assert 1 not in signs or -1 not in signs


# ------------------------------------------------- skeleton decomposition


def test_skeleton_of_one_saddle_sphere():
    sk = skeleton_decomposition(zoo.example("tight_one_saddle"))
    assert sk.skeleton == ("f0", "f1")
    assert sk.basins == (("a", (0,)), ("b", (1,)))
    assert sk.semibasins == ()


def test_skeleton_of_embryo_sphere_has_a_semibasin():
    sk = skeleton_decomposition(zoo.example("embryo_positive"))
    assert sk.skeleton == ("c0", "c1")
    assert sk.basins == (("p", (0,)),)
    assert sk.semibasins == (("B", (1,)),)


def test_skeleton_of_three_basin_chain():
    sk = skeleton_decomposition(zoo.example("three_basin_chain"))
    assert sk.skeleton == ("u0", "u1", "v0", "v1")
    assert sk.basins == (("p0", (0,)), ("p1", (1, 2)), ("p2", (3,)))


def test_basins_partition_faces_and_count_sources(universe_list):
    for g in universe_list:
        sk = skeleton_decomposition(g)
        groups = sk.basins + sk.semibasins
        covered = sorted(i for _, faces in groups for i in faces)
        assert covered == [f.index for f in g.faces()]
        positive_sources = [
            p.id for p in g.points_of_kind(ELLIPTIC) if p.sign > 0
        ]
        assert len(sk.basins) == len(positive_sources)


# ------------------------------------------------------------ positive tree


def test_positive_tree_of_one_saddle_sphere():
    pt = positive_tree(zoo.example("tight_one_saddle"))
    assert pt.nodes == ("a", "b")
    assert pt.links == (("a", "b", "h"),)
    assert pt.is_tree()
    assert pt.path("a", "b") == ["h"]


def test_positive_tree_of_chain_and_path_query():
    g = zoo.example("three_basin_chain")
    pt = positive_tree(g)
    assert pt.nodes == ("p0", "p1", "p2")
    assert pt.links == (("p0", "p1", "h0"), ("p1", "p2", "h1"))
    assert pt.is_tree()
    assert unique_positive_path(g, "p0", "p2") == ["h0", "h1"]
    assert unique_positive_path(g, "p2", "p0") == ["h1", "h0"]
    assert unique_positive_path(g, "p1", "p1") == []


def test_positive_tree_rejects_parallel_links():
    pt = positive_tree(zoo.example("double_join_cycle"))
    assert len(pt.links) == 2
    assert {frozenset(l[:2]) for l in pt.links} == {frozenset(("p0", "p1"))}
    assert not pt.is_tree()
    with pytest.raises(GraphError):
        pt.path("p0", "p1")


def test_positive_tree_rejects_self_loop():
    pt = positive_tree(zoo.example("overtwisted_loop_positive"))
    assert pt.links == (("p", "p", "h"),)
    assert not pt.is_tree()


def test_positive_tree_rejects_homoclinic_input():
    with pytest.raises(GraphError):
        positive_tree(zoo.example("tight_saddle_connection"))


def test_unique_path_rejects_unknown_endpoints():
    g = zoo.example("three_basin_chain")
    with pytest.raises(GraphError):
        unique_positive_path(g, "p0", "z")
