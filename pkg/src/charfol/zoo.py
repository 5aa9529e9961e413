"""A small zoo of named example spheres used across tests and docs.

Every entry is a valid :class:`~charfol.model.FoliationGraph`.  The tight
ones stay tight under the decision procedure; the overtwisted ones carry a
same-sign polygon.
"""

from __future__ import annotations

from .model import FoliationGraph, build


def trivial() -> FoliationGraph:
    """Source, sink, and the single marker leaf needed for cellularity."""
    return build(
        points=[("p", "elliptic", 1), ("q", "elliptic", -1)],
        edges=[("m0", "p", None, "q", None, True)],
        rotation={"p": [("m0", "src")], "q": [("m0", "tgt")]},
    )


def tight_one_saddle() -> FoliationGraph:
    """Two sources feeding a positive saddle whose outflow drains to one sink."""
    return build(
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
            "h": [("ea", "tgt"), ("f0", "src"), ("eb", "tgt"), ("f1", "src")],
            "z": [("f0", "tgt"), ("f1", "tgt")],
        },
    )


def tight_one_saddle_negative() -> FoliationGraph:
    """Time-reversed counterpart: a negative saddle splitting toward two sinks."""
    return build(
        points=[
            ("p", "elliptic", 1),
            ("h", "hyperbolic", -1),
            ("y", "elliptic", -1),
            ("z", "elliptic", -1),
        ],
        edges=[
            ("g0", "p", None, "h", "s0"),
            ("g1", "p", None, "h", "s1"),
            ("k0", "h", "u0", "y", None),
            ("k1", "h", "u1", "z", None),
        ],
        rotation={
            "p": [("g0", "src"), ("g1", "src")],
            "h": [("g0", "tgt"), ("k0", "src"), ("g1", "tgt"), ("k1", "src")],
            "y": [("k0", "tgt")],
            "z": [("k1", "tgt")],
        },
    )


def overtwisted_loop_positive() -> FoliationGraph:
    """A positive saddle fed twice by the same source: a same-sign bigon.

    The disc bounded by the two inbound separatrices has one elliptic corner
    and one saddle corner, both positive.
    """
    return build(
        points=[
            ("p", "elliptic", 1),
            ("h", "hyperbolic", 1),
            ("y", "elliptic", -1),
            ("z", "elliptic", -1),
        ],
        edges=[
            ("g0", "p", None, "h", "s0"),
            ("g1", "p", None, "h", "s1"),
            ("k0", "h", "u0", "y", None),
            ("k1", "h", "u1", "z", None),
        ],
        rotation={
            "p": [("g0", "src"), ("g1", "src")],
            "h": [("g0", "tgt"), ("k0", "src"), ("g1", "tgt"), ("k1", "src")],
            "y": [("k0", "tgt")],
            "z": [("k1", "tgt")],
        },
    )


def overtwisted_loop_negative() -> FoliationGraph:
    return overtwisted_loop_positive().reverse()


def embryo_positive() -> FoliationGraph:
    """One positive embryo between a source and a sink (a birth moment)."""
    return build(
        points=[
            ("p", "elliptic", 1),
            ("B", "embryo", 1),
            ("z", "elliptic", -1),
        ],
        edges=[
            ("a", "p", None, "B", "in"),
            ("c0", "B", "b0", "z", None),
            ("c1", "B", "b1", "z", None),
        ],
        rotation={
            "p": [("a", "src")],
            "B": [("a", "tgt"), ("c0", "src"), ("c1", "src")],
            "z": [("c0", "tgt"), ("c1", "tgt")],
        },
    )


def embryo_negative() -> FoliationGraph:
    return embryo_positive().reverse()


def double_join_cycle() -> FoliationGraph:
    """Two positive saddles each joining the same pair of sources.

    Any level order makes one of them function-negative; the tie makes both
    joins land on the same pair of circles.  Either way no simple taming
    assignment exists, and the source-side discs assemble into an
    all-positive quadrilateral.
    """
    return build(
        points=[
            ("p0", "elliptic", 1),
            ("p1", "elliptic", 1),
            ("h0", "hyperbolic", 1),
            ("h1", "hyperbolic", 1),
            ("z0", "elliptic", -1),
            ("z1", "elliptic", -1),
        ],
        edges=[
            ("s00", "p0", None, "h0", "s0"),
            ("s01", "p1", None, "h0", "s1"),
            ("s10", "p1", None, "h1", "s0"),
            ("s11", "p0", None, "h1", "s1"),
            ("u0n", "h0", "u0", "z0", None),
            ("u0s", "h0", "u1", "z1", None),
            ("u1n", "h1", "u0", "z0", None),
            ("u1s", "h1", "u1", "z1", None),
        ],
        rotation={
            "p0": [("s00", "src"), ("s11", "src")],
            "p1": [("s01", "src"), ("s10", "src")],
            "h0": [("s00", "tgt"), ("u0n", "src"), ("s01", "tgt"), ("u0s", "src")],
            "h1": [("s10", "tgt"), ("u1n", "src"), ("s11", "tgt"), ("u1s", "src")],
            "z0": [("u0n", "tgt"), ("u1n", "tgt")],
            "z1": [("u0s", "tgt"), ("u1s", "tgt")],
        },
    )


def three_basin_chain() -> FoliationGraph:
    """Three sources in a row, joined left-to-right by two positive saddles.

    The smallest instance whose positive-source tree has interior structure:
    the only path between the outer sources runs through both saddles.
    """
    return build(
        points=[
            ("p0", "elliptic", 1),
            ("p1", "elliptic", 1),
            ("p2", "elliptic", 1),
            ("h0", "hyperbolic", 1),
            ("h1", "hyperbolic", 1),
            ("z", "elliptic", -1),
        ],
        edges=[
            ("a0", "p0", None, "h0", "s0"),
            ("a1", "p1", None, "h0", "s1"),
            ("b0", "p1", None, "h1", "s0"),
            ("b1", "p2", None, "h1", "s1"),
            ("u0", "h0", "u0", "z", None),
            ("u1", "h0", "u1", "z", None),
            ("v0", "h1", "u0", "z", None),
            ("v1", "h1", "u1", "z", None),
        ],
        rotation={
            "p0": [("a0", "src")],
            "p1": [("a1", "src"), ("b0", "src")],
            "p2": [("b1", "src")],
            "h0": [("a0", "tgt"), ("u0", "src"), ("a1", "tgt"), ("u1", "src")],
            "h1": [("b0", "tgt"), ("v0", "src"), ("b1", "tgt"), ("v1", "src")],
            "z": [("u0", "tgt"), ("u1", "tgt"), ("v1", "tgt"), ("v0", "tgt")],
        },
    )


def tight_saddle_connection() -> FoliationGraph:
    """A saddle-saddle connection that resolves, on either side, to a tight sphere.

    One unstable separatrix of ``h`` lands directly in a stable slot of
    ``h2`` instead of reaching a sink.
    """
    return build(
        points=[
            ("a", "elliptic", 1),
            ("b", "elliptic", 1),
            ("c", "elliptic", 1),
            ("h", "hyperbolic", 1),
            ("h2", "hyperbolic", 1),
            ("z", "elliptic", -1),
        ],
        edges=[
            ("ea", "a", None, "h", "s0"),
            ("eb", "b", None, "h", "s1"),
            ("conn", "h", "u0", "h2", "s0"),
            ("f1", "h", "u1", "z", None),
            ("e3", "c", None, "h2", "s1"),
            ("k0", "h2", "u0", "z", None),
            ("k1", "h2", "u1", "z", None),
        ],
        rotation={
            "a": [("ea", "src")],
            "b": [("eb", "src")],
            "c": [("e3", "src")],
            "h": [("ea", "tgt"), ("conn", "src"), ("eb", "tgt"), ("f1", "src")],
            "h2": [("conn", "tgt"), ("k0", "src"), ("e3", "tgt"), ("k1", "src")],
            "z": [("k0", "tgt"), ("f1", "tgt"), ("k1", "tgt")],
        },
    )


def chained_saddles() -> FoliationGraph:
    """Both unstable separatrices of one saddle feed the stable slots of another.

    Twice-broken flow with point surplus (0, 2); overtwisted however the
    connections are resolved.
    """
    return build(
        points=[
            ("a", "elliptic", 1),
            ("b", "elliptic", 1),
            ("h1", "hyperbolic", 1),
            ("h2", "hyperbolic", 1),
            ("y", "elliptic", -1),
            ("z", "elliptic", -1),
        ],
        edges=[
            ("ea", "a", None, "h1", "s0"),
            ("eb", "b", None, "h1", "s1"),
            ("c0", "h1", "u0", "h2", "s0"),
            ("c1", "h1", "u1", "h2", "s1"),
            ("k0", "h2", "u0", "y", None),
            ("k1", "h2", "u1", "z", None),
        ],
        rotation={
            "a": [("ea", "src")],
            "b": [("eb", "src")],
            "h1": [("ea", "tgt"), ("c0", "src"), ("eb", "tgt"), ("c1", "src")],
            "h2": [("c0", "tgt"), ("k0", "src"), ("c1", "tgt"), ("k1", "src")],
            "y": [("k0", "tgt")],
            "z": [("k1", "tgt")],
        },
    )


ZOO = {
    "trivial": trivial,
    "tight_one_saddle": tight_one_saddle,
    "tight_one_saddle_negative": tight_one_saddle_negative,
    "overtwisted_loop_positive": overtwisted_loop_positive,
    "overtwisted_loop_negative": overtwisted_loop_negative,
    "embryo_positive": embryo_positive,
    "embryo_negative": embryo_negative,
    "double_join_cycle": double_join_cycle,
    "three_basin_chain": three_basin_chain,
    "tight_saddle_connection": tight_saddle_connection,
    "chained_saddles": chained_saddles,
}


def example(name: str) -> FoliationGraph:
    try:
        return ZOO[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choices: {sorted(ZOO)}") from None
