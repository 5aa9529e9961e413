"""Value assignments on singular points and what it takes for one to tame.

An assignment is a map from point ids to :class:`fractions.Fraction`
levels.  It is *Lyapunov* when every edge strictly increases.  It *tames*
the flow when, additionally, each hyperbolic point joins or splits the
sublevel boundary circles in agreement with its sign: just below the
saddle's level its two inbound separatrices must cross two different
circles for a positive point (a join) and the same circle for a negative
one (a split).  Embryos are neutral and only participate through the
Lyapunov condition.

*Simplicity* is a per-level condition on ties: the joins performed at one
critical level must form a forest.  Both the circle-level reading and the
refined component-level reading are computed; the refined one is what the
ball-extension construction consumes.

Corner remnants (left behind by the bypass move) have no critical level;
all functions here reject graphs containing them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .invariants import Region
from .model import CORNER, ELLIPTIC, EMBRYO, HYPERBOLIC, FoliationGraph, GraphError

Assignment = Mapping[str, Fraction]


def _reject_corners(g: FoliationGraph) -> None:
    corners = [p.id for p in g.points.values() if p.kind == CORNER]
    if corners:
        raise GraphError(
            f"corner remnants {sorted(corners)} have no critical level; "
            "resolve them before taming analysis"
        )


def check_assignment(g: FoliationGraph, a: Assignment) -> None:
    _reject_corners(g)
    missing = sorted(set(g.points) - set(a))
    if missing:
        raise GraphError(f"assignment misses points {missing}")


def normalized_assignment(
    g: FoliationGraph, saddle_order: Sequence[str]
) -> dict[str, Fraction]:
    """Pin elliptic points to 0/1 and spread saddles by their order position."""
    _reject_corners(g)
    saddles = {p.id for p in g.saddle_points()}
    if set(saddle_order) != saddles or len(saddle_order) != len(saddles):
        raise GraphError("saddle order must list every saddle-type point once")
    n = len(saddle_order)
    a: dict[str, Fraction] = {}
    for p in g.points.values():
        if p.kind == ELLIPTIC:
            a[p.id] = Fraction(0 if p.sign > 0 else 1)
    for k, pid in enumerate(saddle_order, start=1):
        a[pid] = Fraction(k, n + 1)
    return a


def lyapunov_violations(g: FoliationGraph, a: Assignment) -> list[str]:
    check_assignment(g, a)
    out = []
    for eid, e in sorted(g.edges.items()):
        if not a[e.src.point] < a[e.dst.point]:
            out.append(
                f"edge {eid}: value must increase ({e.src.point}={a[e.src.point]} "
                f"-> {e.dst.point}={a[e.dst.point]})"
            )
    return out


def is_lyapunov(g: FoliationGraph, a: Assignment) -> bool:
    return not lyapunov_violations(g, a)


def sublevel_region(g: FoliationGraph, a: Assignment, t: Fraction) -> Region:
    return Region(g, [pid for pid in g.points if a[pid] <= t])


def level_just_below(g: FoliationGraph, a: Assignment, value: Fraction) -> Fraction:
    """Midpoint between ``value`` and the next distinct assigned value below."""
    below = [v for v in a.values() if v < value]
    if not below:
        raise GraphError(f"no assigned value lies below {value}")
    return (max(below) + value) / 2


def saddle_function_sign(g: FoliationGraph, a: Assignment, hid: str) -> int:
    """+1 if the saddle joins two sublevel circles, -1 if it splits one."""
    p = g.points[hid]
    if p.kind != HYPERBOLIC:
        raise GraphError(f"{hid} is not a hyperbolic point")
    t = level_just_below(g, a, a[hid])
    region = sublevel_region(g, a, t)
    c0 = region.circle_of_edge(g.edge_at_slot(hid, "s0").id)
    c1 = region.circle_of_edge(g.edge_at_slot(hid, "s1").id)
    return 1 if c0 != c1 else -1


def taming_violations(g: FoliationGraph, a: Assignment) -> list[str]:
    out = lyapunov_violations(g, a)
    if out:
        return out
    for p in sorted(g.points_of_kind(HYPERBOLIC), key=lambda p: p.id):
        fs = saddle_function_sign(g, a, p.id)
        if fs != p.sign:
            word = "joins" if fs > 0 else "splits"
            out.append(
                f"saddle {p.id}: level structure {word} circles but its sign is {p.sign:+d}"
            )
    return out


def is_taming(g: FoliationGraph, a: Assignment) -> bool:
    return not taming_violations(g, a)


# ------------------------------------------------------------------ simplicity


def _forest_ok(nodes: Iterable, links: Iterable[tuple]) -> bool:
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in links:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


@dataclass(frozen=True)
class LevelReport:
    value: Fraction
    joins: tuple[str, ...]
    splits: tuple[str, ...]
    circle_forest: bool
    component_forest: bool


@dataclass(frozen=True)
class SimplicityReport:
    levels: tuple[LevelReport, ...]

    @property
    def circle_simple(self) -> bool:
        return all(l.circle_forest for l in self.levels)

    @property
    def component_simple(self) -> bool:
        return all(l.component_forest for l in self.levels)


def simplicity_check(g: FoliationGraph, a: Assignment) -> SimplicityReport:
    check_assignment(g, a)
    if lyapunov_violations(g, a):
        raise GraphError("simplicity is only defined for Lyapunov assignments")
    saddle_values = sorted(
        {a[p.id] for p in g.points_of_kind(HYPERBOLIC)}
    )
    reports = []
    for v in saddle_values:
        t = level_just_below(g, a, v)
        region = sublevel_region(g, a, t)
        at_level = [
            p.id
            for p in g.points_of_kind(HYPERBOLIC)
            if a[p.id] == v
        ]
        joins, splits, links = [], [], []
        for hid in sorted(at_level):
            c0 = region.circle_of_edge(g.edge_at_slot(hid, "s0").id)
            c1 = region.circle_of_edge(g.edge_at_slot(hid, "s1").id)
            if c0 != c1:
                joins.append(hid)
                links.append((c0, c1))
            else:
                splits.append(hid)
        ncircles = len(region.boundary_circles())
        circle_forest = _forest_ok(range(ncircles), links)

        # refined reading: collapse circles to the component they bound
        comp_of_circle: dict[int, str] = {}
        comp = _components(g, region)
        for idx, circle in enumerate(region.boundary_circles()):
            eid = circle.crossed_edges()[0]
            comp_of_circle[idx] = comp[g.edges[eid].src.point]
        comp_links = [(comp_of_circle[u], comp_of_circle[v]) for u, v in links]
        component_forest = _forest_ok(set(comp_of_circle.values()), comp_links)

        reports.append(
            LevelReport(v, tuple(joins), tuple(splits), circle_forest, component_forest)
        )
    return SimplicityReport(tuple(reports))


def _components(g: FoliationGraph, region: Region) -> dict[str, str]:
    parent = {pid: pid for pid in region.inside}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in region.interior_edges():
        e = g.edges[eid]
        a, b = find(e.src.point), find(e.dst.point)
        if a != b:
            parent[a] = b
    return {pid: find(pid) for pid in region.inside}


# --------------------------------------------------- positive skeleton, clearance


@dataclass(frozen=True)
class PositiveSkeleton:
    """Positive elliptic points linked by the saddles that join their basins."""

    nodes: tuple[str, ...]
    links: tuple[tuple[str, str, str, Fraction], ...]  # (p, q, saddle, value)
    complete: bool  # False when some join saddle is not fed by elliptic points

    def is_forest(self) -> bool:
        return _forest_ok(self.nodes, [(p, q) for p, q, _, _ in self.links])

    def is_tree(self) -> bool:
        return self.is_forest() and (
            len(self.links) == len(self.nodes) - 1 if self.nodes else True
        )

    def connection_level(self, p: str, q: str) -> Fraction | None:
        """The smallest level by which the basins of p and q have merged."""
        if p == q:
            # both separatrices drain the same basin; it exists from its own level on
            raise GraphError("connection level is defined for distinct nodes")
        parent = {n: n for n in self.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _, value in sorted(self.links, key=lambda l: (l[3], l[2])):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
            if find(p) == find(q):
                return value
        return None


def positive_elliptic_graph(g: FoliationGraph, a: Assignment) -> PositiveSkeleton:
    check_assignment(g, a)
    nodes = tuple(sorted(p.id for p in g.points_of_kind(ELLIPTIC) if p.sign > 0))
    links = []
    complete = True
    for p in sorted(g.points_of_kind(HYPERBOLIC), key=lambda p: p.id):
        if saddle_function_sign(g, a, p.id) != 1:
            continue
        srcs = [
            g.edge_at_slot(p.id, slot).src.point for slot in ("s0", "s1")
        ]
        if any(
            g.points[s].kind != ELLIPTIC or g.points[s].sign <= 0 for s in srcs
        ):
            complete = False
            continue
        links.append((srcs[0], srcs[1], p.id, a[p.id]))
    return PositiveSkeleton(nodes, tuple(links), complete)


def component_merge_level(
    g: FoliationGraph, a: Assignment, p: str, q: str
) -> Fraction | None:
    """First assigned value at which p and q share a sublevel component."""
    if p == q:
        return a[p]
    values = sorted(set(a.values()))
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    present: set[str] = set()
    for v in values:
        for pid in sorted(g.points):
            if a[pid] == v:
                present.add(pid)
                parent[pid] = pid
        for e in g.edges.values():
            if e.src.point in present and e.dst.point in present:
                ru, rv = find(e.src.point), find(e.dst.point)
                if ru != rv:
                    parent[ru] = rv
        if p in present and q in present and find(p) == find(q):
            return v
    return None


def clearance_violations(g: FoliationGraph, a: Assignment) -> list[str]:
    """Every splitting saddle must sit strictly above the merge of its feeders.

    A diagnostic inequality satisfied by every taming assignment; exposed
    separately because it is the working invariant behind the synthesis
    recursion.
    """
    check_assignment(g, a)
    out = []
    for p in sorted(g.points_of_kind(HYPERBOLIC), key=lambda p: p.id):
        if saddle_function_sign(g, a, p.id) != -1:
            continue
        s0 = g.edge_at_slot(p.id, "s0").src.point
        s1 = g.edge_at_slot(p.id, "s1").src.point
        merged = component_merge_level(g, a, s0, s1)
        if merged is None or not a[p.id] > merged:
            out.append(
                f"splitting saddle {p.id} at {a[p.id]} does not clear the "
                f"merge level {merged} of {s0} and {s1}"
            )
    return out


# ------------------------------------------- path-inequality characterization


def positive_tree_links(g: FoliationGraph) -> tuple[tuple[str, str, str], ...]:
    """(source, source, saddle) for each positive saddle fed by two positive
    elliptic points.  These links form the skeleton tree of a tight
    connection-free foliation."""
    links = []
    for p in sorted(g.points_of_kind(HYPERBOLIC), key=lambda p: p.id):
        if p.sign <= 0:
            continue
        srcs = []
        for slot in ("s0", "s1"):
            ref = g.edge_at_slot(p.id, slot).src
            q = g.points[ref.point]
            if ref.slot is not None or q.kind != ELLIPTIC or q.sign <= 0:
                break
            srcs.append(ref.point)
        else:
            links.append((srcs[0], srcs[1], p.id))
    return tuple(links)


def positive_tree_is_tree(g: FoliationGraph) -> bool:
    nodes = [p.id for p in g.points_of_kind(ELLIPTIC) if p.sign > 0]
    links = positive_tree_links(g)
    if len(links) != len(nodes) - 1:
        return False
    return _forest_ok(nodes, [(u, v) for u, v, _ in links])


def eq_simplicity_violations(g: FoliationGraph, a: Assignment) -> list[str]:
    """Path-inequality reading of simplicity.

    Every negative saddle must sit strictly above the smallest positive-saddle
    value on the skeleton path between the two positive elliptic points that
    feed it.  Together with the Lyapunov condition this is equivalent to
    taming on tight connection-free instances whose skeleton is a tree.
    """
    check_assignment(g, a)
    links = positive_tree_links(g)
    adj: dict[str, list[tuple[str, str]]] = {}
    for u, v, hid in links:
        adj.setdefault(u, []).append((v, hid))
        adj.setdefault(v, []).append((u, hid))

    def merge_value(src: str, dst: str) -> Fraction | None:
        """Largest join value on the skeleton path: the two circles are one
        only once every join along the path has happened."""
        if src == dst:
            return Fraction(0)
        seen = {src}
        stack: list[tuple[str, Fraction | None]] = [(src, None)]
        while stack:
            node, high = stack.pop()
            for nxt, hid in adj.get(node, ()):
                if nxt in seen:
                    continue
                seen.add(nxt)
                raised = a[hid] if high is None else max(high, a[hid])
                if nxt == dst:
                    return raised
                stack.append((nxt, raised))
        return None

    out = []
    for p in sorted(g.points_of_kind(HYPERBOLIC), key=lambda p: p.id):
        if p.sign >= 0:
            continue
        srcs = []
        for slot in ("s0", "s1"):
            ref = g.edge_at_slot(p.id, slot).src
            q = g.points[ref.point]
            if ref.slot is not None or q.kind != ELLIPTIC or q.sign <= 0:
                out.append(f"negative saddle {p.id} is not fed by elliptic points")
                break
            srcs.append(ref.point)
        else:
            c = merge_value(srcs[0], srcs[1])
            if c is None:
                out.append(
                    f"feeders {srcs[0]}, {srcs[1]} of {p.id} never merge in the skeleton"
                )
            elif not a[p.id] > c:
                out.append(
                    f"negative saddle {p.id} at {a[p.id]} does not exceed the "
                    f"skeleton merge value {c} of {srcs[0]} and {srcs[1]}"
                )
    return out


def eq_simplicity_check(g: FoliationGraph, a: Assignment) -> bool:
    return not eq_simplicity_violations(g, a)


# ----------------------------------------------- sublevel component bookkeeping


def regular_thresholds(g: FoliationGraph, a: Assignment) -> list[Fraction]:
    """Midpoints between consecutive assigned values."""
    check_assignment(g, a)
    values = sorted(set(a.values()))
    return [(u + v) / 2 for u, v in zip(values, values[1:])]


def sublevel_component_surplus(
    g: FoliationGraph, a: Assignment, t: Fraction
) -> dict[str, tuple[int, int]]:
    """Elliptic-minus-saddle count per component of a sublevel set."""
    region = sublevel_region(g, a, t)
    roots = _components(g, region)
    tally: dict[str, list[int]] = {}
    for pid in region.inside:
        p = g.points[pid]
        d = tally.setdefault(roots[pid], [0, 0])
        if p.kind == ELLIPTIC:
            d[0 if p.sign > 0 else 1] += 1
        elif p.kind == HYPERBOLIC:
            d[0 if p.sign > 0 else 1] -= 1
    return {r: (v[0], v[1]) for r, v in tally.items()}
