"""Lyapunov and taming checks, simplicity reports, the path inequality."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charfol import FoliationGraph, GraphError
from charfol import zoo
from charfol.invariants import unique_positive_path
from charfol.taming import (
    clearance_violations,
    component_merge_level,
    eq_simplicity_check,
    eq_simplicity_violations,
    is_lyapunov,
    is_taming,
    lyapunov_violations,
    normalized_assignment,
    positive_elliptic_graph,
    regular_thresholds,
    saddle_function_sign,
    simplicity_check,
    sublevel_component_surplus,
    taming_violations,
)

F = Fraction


def eh2_assignment():
    return {"a": F(0), "b": F(0), "h": F(1, 2), "z": F(1)}


# ------------------------------------------------------------- basic checks


def test_one_saddle_assignment_is_taming_and_simple():
    g = zoo.example("tight_one_saddle")
    a = eh2_assignment()
    assert lyapunov_violations(g, a) == []
    assert taming_violations(g, a) == []
    assert is_taming(g, a)
    rep = simplicity_check(g, a)
    assert rep.circle_simple and rep.component_simple
    assert saddle_function_sign(g, a, "h") == 1


def test_saddle_below_its_sources_is_not_lyapunov():
    g = zoo.example("tight_one_saddle")
    a = {"a": F(1, 2), "b": F(0), "h": F(1, 4), "z": F(1)}
    bad = lyapunov_violations(g, a)
    assert bad and any("ea" in msg or "a" in msg for msg in bad)
    assert not is_lyapunov(g, a)
    assert not is_taming(g, a)


def test_negative_saddle_wants_a_split():
    g = zoo.example("tight_one_saddle_negative")
    a = {"p": F(0), "h": F(1, 2), "y": F(1), "z": F(1)}
    assert saddle_function_sign(g, a, "h") == -1
    assert is_taming(g, a)
    assert clearance_violations(g, a) == []


def test_function_sign_mismatch_is_a_taming_violation():
    # a positive saddle fed twice by one source can only split, never join
    g = zoo.example("overtwisted_loop_positive")
    a = {"p": F(0), "h": F(1, 2), "y": F(1), "z": F(1)}
    assert is_lyapunov(g, a)
    assert saddle_function_sign(g, a, "h") == -1
    assert taming_violations(g, a) != []
    assert not is_taming(g, a)


def test_normalized_assignment_shape():
    g = zoo.example("tight_one_saddle")
    a = normalized_assignment(g, ["h"])
    assert a == eh2_assignment()
    with pytest.raises(GraphError):
        normalized_assignment(g, [])
    with pytest.raises(GraphError):
        normalized_assignment(g, ["h", "h"])


def test_assignment_must_cover_every_point():
    g = zoo.example("tight_one_saddle")
    a = eh2_assignment()
    del a["z"]
    with pytest.raises(GraphError):
        is_taming(g, a)


# --------------------------------------------------------------- simplicity


def test_tie_level_breaks_simplicity_but_not_taming():
    # both saddles of the double join at one level: the level graph is a
    # double link between the same two circles, a cycle either way you read it
    g = zoo.example("double_join_cycle")
    a = {
        "p0": F(0), "p1": F(0),
        "h0": F(1, 2), "h1": F(1, 2),
        "z0": F(1), "z1": F(1),
    }
    assert is_taming(g, a)
    rep = simplicity_check(g, a)
    assert not rep.circle_simple
    assert not rep.component_simple
    level = rep.levels[0]
    assert level.value == F(1, 2)
    assert level.joins == ("h0", "h1") and level.splits == ()


def test_double_join_has_no_simple_order():
    g = zoo.example("double_join_cycle")
    for order in (["h0", "h1"], ["h1", "h0"]):
        a = normalized_assignment(g, order)
        # the second join closes a cycle of components, so its function sign
        # flips to a split and taming fails
        assert is_lyapunov(g, a)
        assert not is_taming(g, a)


def test_simplicity_requires_lyapunov():
    g = zoo.example("tight_one_saddle")
    a = {"a": F(1, 2), "b": F(0), "h": F(1, 4), "z": F(1)}
    with pytest.raises(GraphError):
        simplicity_check(g, a)


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_taming_is_invariant_under_monotone_reparametrization(data):
    g = zoo.example("three_basin_chain")
    base = normalized_assignment(g, ["h0", "h1"])
    values = sorted(set(base.values()))
    deltas = data.draw(
        st.lists(
            st.fractions(min_value=F(1, 7), max_value=F(9)),
            min_size=len(values),
            max_size=len(values),
        )
    )
    start = data.draw(st.fractions(min_value=F(-5), max_value=F(5)))
    new_vals = []
    acc = start
    for d in deltas:
        new_vals.append(acc)
        acc += d
    remap = dict(zip(values, new_vals))
    a = {pid: remap[v] for pid, v in base.items()}
    assert is_lyapunov(g, a) == is_lyapunov(g, base)
    assert is_taming(g, a) == is_taming(g, base)
    rep0, rep1 = simplicity_check(g, base), simplicity_check(g, a)
    assert rep0.circle_simple == rep1.circle_simple
    assert rep0.component_simple == rep1.component_simple


# --------------------------------------------------- merge levels, clearance


def test_component_merge_level_on_the_chain():
    g = zoo.example("three_basin_chain")
    a = normalized_assignment(g, ["h0", "h1"])
    assert component_merge_level(g, a, "p0", "p1") == F(1, 3)
    assert component_merge_level(g, a, "p1", "p2") == F(2, 3)
    assert component_merge_level(g, a, "p0", "p2") == F(2, 3)
    assert component_merge_level(g, a, "p0", "p0") == F(0)


def test_positive_elliptic_graph_mirrors_the_tree():
    g = zoo.example("three_basin_chain")
    a = normalized_assignment(g, ["h0", "h1"])
    sk = positive_elliptic_graph(g, a)
    assert sk.nodes == ("p0", "p1", "p2")
    assert [(p, q, s) for p, q, s, _ in sk.links] == [
        ("p0", "p1", "h0"),
        ("p1", "p2", "h1"),
    ]
    assert [v for *_, v in sk.links] == [F(1, 3), F(2, 3)]


def test_clearance_flags_a_premature_split():
    g = zoo.example("tight_one_saddle_negative")
    # the split is forced to sit at the very bottom, below any merge
    a = {"p": F(0), "h": F(1, 100), "y": F(1), "z": F(1)}
    assert is_taming(g, a)  # a lone source component may split immediately
    assert clearance_violations(g, a) == []


def test_regular_thresholds_are_midpoints():
    g = zoo.example("tight_one_saddle")
    assert regular_thresholds(g, eh2_assignment()) == [F(1, 4), F(3, 4)]


def test_sublevel_component_surplus_below_the_saddle():
    g = zoo.example("tight_one_saddle")
    tally = sorted(sublevel_component_surplus(g, eh2_assignment(), F(1, 4)).values())
    assert tally == [(1, 0), (1, 0)]
    # above the saddle the two discs have merged; the sink is still higher
    above = list(sublevel_component_surplus(g, eh2_assignment(), F(3, 4)).values())
    assert above == [(1, 0)]


# -------------------------------------------- path-inequality characterization

# Frozen instance: three sources in a row of positive saddles plus one
# negative saddle whose split must clear the *latest* join on the unique
# source-to-source path, not the earliest.
MAX_RULE_WITNESS = json.loads("""
{"edges": [
  {"id": "e0",  "src": {"point": "p0", "slot": null},  "dst": {"point": "h0", "slot": "s0"}, "marker": false},
  {"id": "e1",  "src": {"point": "h0", "slot": "u0"},  "dst": {"point": "z0", "slot": null}, "marker": false},
  {"id": "e10", "src": {"point": "p2", "slot": null},  "dst": {"point": "h2", "slot": "s1"}, "marker": false},
  {"id": "e11", "src": {"point": "h2", "slot": "u1"},  "dst": {"point": "z1", "slot": null}, "marker": false},
  {"id": "e2",  "src": {"point": "p1", "slot": null},  "dst": {"point": "h0", "slot": "s1"}, "marker": false},
  {"id": "e3",  "src": {"point": "h0", "slot": "u1"},  "dst": {"point": "z1", "slot": null}, "marker": false},
  {"id": "e4",  "src": {"point": "p0", "slot": null},  "dst": {"point": "h1", "slot": "s0"}, "marker": false},
  {"id": "e5",  "src": {"point": "h1", "slot": "u0"},  "dst": {"point": "z1", "slot": null}, "marker": false},
  {"id": "e6",  "src": {"point": "p2", "slot": null},  "dst": {"point": "h1", "slot": "s1"}, "marker": false},
  {"id": "e7",  "src": {"point": "h1", "slot": "u1"},  "dst": {"point": "z0", "slot": null}, "marker": false},
  {"id": "e8",  "src": {"point": "p1", "slot": null},  "dst": {"point": "h2", "slot": "s0"}, "marker": false},
  {"id": "e9",  "src": {"point": "h2", "slot": "u0"},  "dst": {"point": "z0", "slot": null}, "marker": false}],
 "points": [
  {"id": "h0", "kind": "hyperbolic", "sign": 1},
  {"id": "h1", "kind": "hyperbolic", "sign": 1},
  {"id": "h2", "kind": "hyperbolic", "sign": -1},
  {"id": "p0", "kind": "elliptic", "sign": 1},
  {"id": "p1", "kind": "elliptic", "sign": 1},
  {"id": "p2", "kind": "elliptic", "sign": 1},
  {"id": "z0", "kind": "elliptic", "sign": -1},
  {"id": "z1", "kind": "elliptic", "sign": -1}],
 "rotation": {
  "h0": [["e0", "tgt"], ["e1", "src"], ["e2", "tgt"], ["e3", "src"]],
  "h1": [["e4", "tgt"], ["e5", "src"], ["e6", "tgt"], ["e7", "src"]],
  "h2": [["e8", "tgt"], ["e9", "src"], ["e10", "tgt"], ["e11", "src"]],
  "p0": [["e0", "src"], ["e4", "src"]],
  "p1": [["e2", "src"], ["e8", "src"]],
  "p2": [["e6", "src"], ["e10", "src"]],
  "z0": [["e1", "tgt"], ["e7", "tgt"], ["e9", "tgt"]],
  "z1": [["e3", "tgt"], ["e11", "tgt"], ["e5", "tgt"]]}}
""")


def max_rule_graph():
    g = FoliationGraph.from_data(MAX_RULE_WITNESS)
    assert g.validate() == []
    return g


def test_path_inequality_uses_the_latest_join():
    g = max_rule_graph()
    # h2 splits the pair (p1, p2); their unique path carries both joins
    assert unique_positive_path(g, "p1", "p2") == ["h0", "h1"]

    good = normalized_assignment(g, ["h0", "h1", "h2"])  # split after both joins
    assert is_taming(g, good)
    assert eq_simplicity_check(g, good)

    bad = normalized_assignment(g, ["h0", "h2", "h1"])  # split between the joins
    assert is_lyapunov(g, bad)
    assert not is_taming(g, bad)
    assert not eq_simplicity_check(g, bad)
    assert eq_simplicity_violations(g, bad) != []

    # the discriminating comparison: the split clears the earliest join on
    # the path but not the latest one, so only the latest-join rule rejects it
    assert bad["h2"] > min(bad["h0"], bad["h1"])
    assert not bad["h2"] > max(bad["h0"], bad["h1"])


def test_path_inequality_matches_taming_on_every_order(tight_instances):
    import itertools

    from charfol.invariants import positive_tree

    checked = 0
    for g in tight_instances:
        if g.homoclinic_edges() or not positive_tree(g).is_tree():
            continue
        saddles = sorted(p.id for p in g.points.values() if p.kind == "hyperbolic")
        for perm in itertools.permutations(saddles):
            a = normalized_assignment(g, list(perm))
            lhs = is_taming(g, a)
            rhs = is_lyapunov(g, a) and eq_simplicity_check(g, a)
            assert lhs == rhs, (g.canonical_form(), perm)
            checked += 1
    assert checked == 107
