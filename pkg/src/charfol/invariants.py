"""Invariants of separatrix graphs.

Three layers live here:

* the point surplus pair (positive/negative elliptic count minus saddle
  count), the basic sphere bookkeeping identity;
* regions spanned by a set of points, with their outward-transverse
  boundary circles traced combinatorially through faces and cut edges;
* polygons: unions of faces whose closure is a disc, with their boundary
  corners classified and signed.  An embedded polygon all of whose signed
  corners agree is the overtwistedness certificate used elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .model import (
    CORNER,
    ELLIPTIC,
    EMBRYO,
    HYPERBOLIC,
    Dart,
    Face,
    FoliationGraph,
    GraphError,
)


def point_surplus(g: FoliationGraph) -> tuple[int, int]:
    """(positive, negative) elliptic-over-hyperbolic surplus.

    Embryos and corner remnants are neutral.  On a valid sphere the two
    numbers add up to 2.
    """
    dp = dm = 0
    for p in g.points.values():
        if p.kind == ELLIPTIC:
            if p.sign > 0:
                dp += 1
            else:
                dm += 1
        elif p.kind == HYPERBOLIC:
            if p.sign > 0:
                dp -= 1
            else:
                dm -= 1
    return dp, dm


# --------------------------------------------------------------------- regions


@dataclass(frozen=True)
class BoundaryCircle:
    """One transverse boundary circle of a region.

    ``items`` alternates ``("x", edge_id)`` crossings with
    ``("f", face_index)`` passages, in traversal order.
    """

    items: tuple[tuple, ...]

    def crossed_edges(self) -> tuple[str, ...]:
        return tuple(it[1] for it in self.items if it[0] == "x")

    def key(self) -> tuple[tuple, ...]:
        """Canonical rotation, stable across unrelated region changes."""
        n = len(self.items)
        if n == 0:
            return ()
        return min(
            tuple(self.items[(i + k) % n] for k in range(n)) for i in range(n)
        )


class Region:
    """The points of ``inside`` together with everything they span.

    A region is *valid* when its boundary can be drawn transverse to the
    flow with the flow exiting: no edge may point into the region from
    outside, and every face that touches the region must have its source
    corner inside.
    """

    def __init__(self, graph: FoliationGraph, inside: Iterable[str]) -> None:
        self.graph = graph
        self.inside = frozenset(inside)
        unknown = self.inside - set(graph.points)
        if unknown:
            raise GraphError(f"region references unknown points {sorted(unknown)}")
        self._circles: list[BoundaryCircle] | None = None

    # membership helpers -----------------------------------------------------

    def _edge_state(self, eid: str) -> str:
        e = self.graph.edges[eid]
        s, t = e.src.point in self.inside, e.dst.point in self.inside
        if s and t:
            return "in"
        if not s and not t:
            return "out"
        return "cut" if s else "inward"

    def cut_edges(self) -> list[str]:
        return sorted(e for e in self.graph.edges if self._edge_state(e) == "cut")

    def interior_edges(self) -> list[str]:
        return sorted(e for e in self.graph.edges if self._edge_state(e) == "in")

    def validate(self) -> list[str]:
        problems = []
        for eid in sorted(self.graph.edges):
            if self._edge_state(eid) == "inward":
                problems.append(f"edge {eid} points into the region")
        for f in self.graph.faces():
            touches = any(c.point in self.inside for c in f.corners)
            if touches and f.source_point not in self.inside:
                problems.append(
                    f"face {f.index} touches the region but its source corner is outside"
                )
        return problems

    @property
    def is_valid(self) -> bool:
        return not self.validate()

    # bookkeeping ------------------------------------------------------------

    def surplus(self) -> tuple[int, int]:
        dp = dm = 0
        for pid in self.inside:
            p = self.graph.points[pid]
            if p.kind == ELLIPTIC:
                if p.sign > 0:
                    dp += 1
                else:
                    dm += 1
            elif p.kind == HYPERBOLIC:
                if p.sign > 0:
                    dp -= 1
                else:
                    dm -= 1
        return dp, dm

    def component_count(self) -> int:
        parent = {pid: pid for pid in self.inside}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in self.interior_edges():
            e = self.graph.edges[eid]
            a, b = find(e.src.point), find(e.dst.point)
            if a != b:
                parent[a] = b
        return len({find(p) for p in self.inside})

    # boundary tracing ---------------------------------------------------------

    def _face_runs(self) -> dict[Dart, tuple[Dart, int]]:
        """Map each cut-edge dart with an *outgoing* arc to (arc end, face index).

        Within a face walk, classify every side and corner as inside or
        outside; each maximal inside run is one transverse arc connecting
        the cut side it follows to the cut side it precedes.
        """
        g = self.graph
        arcs: dict[Dart, tuple[Dart, int]] = {}
        for f in g.faces():
            n = len(f.darts)
            # item stream: side darts, with the corner after each side
            states = []
            for i, d in enumerate(f.darts):
                states.append(("side", d, self._edge_state(d[0])))
                cpt = f.corners[i].point
                states.append(("corner", d, "in" if cpt in self.inside else "out"))
            cut_positions = [
                i for i, st in enumerate(states) if st[0] == "side" and st[2] == "cut"
            ]
            if not cut_positions:
                continue
            m = len(states)
            for a_idx, start in enumerate(cut_positions):
                end = cut_positions[(a_idx + 1) % len(cut_positions)]
                between = []
                j = (start + 1) % m
                while j != end:
                    between.append(states[j])
                    j = (j + 1) % m
                kinds = {st[2] for st in between}
                if kinds <= {"in"}:
                    # arc from the cut side at `start` to the cut side at `end`
                    arcs[states[start][1]] = (states[end][1], f.index)
                elif not kinds <= {"out"}:
                    raise GraphError(
                        f"face {f.index}: mixed run without a cut side (invalid region)"
                    )
        return arcs

    def boundary_circles(self) -> list[BoundaryCircle]:
        if self._circles is not None:
            return self._circles
        bad = self.validate()
        if bad:
            raise GraphError("; ".join(bad))
        g = self.graph
        arcs = self._face_runs()
        # sanity: every cut dart participates in exactly one arc end
        circles: list[BoundaryCircle] = []
        used: set[Dart] = set()
        for start in sorted(arcs):
            if start in used:
                continue
            items: list[tuple] = []
            d = start
            while True:
                used.add(d)
                end, face_index = arcs[d]
                items.append(("f", face_index))
                items.append(("x", end[0]))
                d = g.theta(end)
                if d == start:
                    break
                if d not in arcs:
                    raise GraphError("boundary tracing left the arc system")
            circles.append(BoundaryCircle(tuple(items)))
        self._circles = circles
        return circles

    def circle_of_edge(self, eid: str) -> int:
        """Index of the boundary circle crossing the given cut edge."""
        for i, c in enumerate(self.boundary_circles()):
            if eid in c.crossed_edges():
                return i
        raise GraphError(f"edge {eid} is not a cut edge of the region")

    def euler_characteristic(self) -> int:
        return 2 * self.component_count() - len(self.boundary_circles())

    def analysis(self) -> dict:
        dp, dm = self.surplus()
        circles = self.boundary_circles()
        return {
            "points": sorted(self.inside),
            "surplus": [dp, dm],
            "components": self.component_count(),
            "boundary_circles": len(circles),
            "cut_edges": self.cut_edges(),
            "euler_characteristic": self.euler_characteristic(),
            "euler_consistent": dp + dm == self.euler_characteristic(),
        }


# ------------------------------------------------------- skeleton and basins


@dataclass(frozen=True)
class SkeletonDecomposition:
    """Faces grouped by the point their flow emanates from.

    ``skeleton`` is the set of edges emitted by saddle-type points (the
    unstable separatrices of hyperbolic points, the boundary separatrices of
    positive embryos and the anchor separatrix of negative ones).  Cutting
    the sphere along it leaves one open disc per positive elliptic point
    (``basins``) and one per positive embryo (``semibasins``); each entry
    pairs the emitting point with the sorted face indices it spans.
    """

    skeleton: tuple[str, ...]
    basins: tuple[tuple[str, tuple[int, ...]], ...]
    semibasins: tuple[tuple[str, tuple[int, ...]], ...]

    def center_of_face(self, index: int) -> str:
        for center, members in self.basins + self.semibasins:
            if index in members:
                return center
        raise GraphError(f"face {index} belongs to no basin")


def skeleton_decomposition(g: FoliationGraph) -> SkeletonDecomposition:
    """Cut along saddle-emitted separatrices and group the faces that merge."""
    g.require_valid()
    skeleton = set()
    for eid, e in g.edges.items():
        if e.marker:
            continue
        src = g.points[e.src.point]
        if src.kind in (HYPERBOLIC, EMBRYO) and e.src.slot != "zone":
            skeleton.add(eid)

    faces = g.faces()
    parent = {f.index: f.index for f in faces}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in g.edges:
        if eid in skeleton:
            continue
        a = find(g.face_of_dart((eid, "src")).index)
        b = find(g.face_of_dart((eid, "tgt")).index)
        if a != b:
            parent[a] = b

    groups: dict[int, list[int]] = {}
    for f in faces:
        groups.setdefault(find(f.index), []).append(f.index)

    basins, semibasins = [], []
    for members in groups.values():
        centers = {c.point for i in members for c in faces[i].source_corners}
        if len(centers) != 1:
            raise GraphError(
                f"faces {sorted(members)} form a basin with centers "
                f"{sorted(centers)}; expected exactly one emitting point"
            )
        (center,) = centers
        p = g.points[center]
        entry = (center, tuple(sorted(members)))
        if p.kind == ELLIPTIC and p.sign > 0:
            basins.append(entry)
        elif p.kind == EMBRYO and p.sign > 0:
            semibasins.append(entry)
        else:
            raise GraphError(
                f"basin center {center} is a {p.kind} of sign {p.sign}"
            )
    return SkeletonDecomposition(
        tuple(sorted(skeleton)), tuple(sorted(basins)), tuple(sorted(semibasins))
    )


# -------------------------------------------------- positive-separatrix graph


@dataclass(frozen=True)
class PositiveTree:
    """Positive elliptic points linked through the positive saddles they feed.

    A link ``(p, q, saddle)`` records that the two stable separatrices of a
    positive hyperbolic point come from the basins of ``p`` and ``q``
    (possibly ``p == q``: a self-loop, the overtwisted pseudovertex shape).
    """

    nodes: tuple[str, ...]
    links: tuple[tuple[str, str, str], ...]

    def is_tree(self) -> bool:
        if not self.nodes:
            return not self.links
        if len(self.links) != len(self.nodes) - 1:
            return False
        parent = {n: n for n in self.nodes}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.links:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def path(self, start: str, goal: str) -> list[str]:
        """Saddle ids along the unique path from ``start`` to ``goal``."""
        if not self.is_tree():
            raise GraphError("positive-separatrix graph is not a tree")
        if start not in self.nodes or goal not in self.nodes:
            raise GraphError("path endpoints must be positive elliptic points")
        if start == goal:
            return []
        adj: dict[str, list[tuple[str, str]]] = {}
        for u, v, hid in self.links:
            adj.setdefault(u, []).append((v, hid))
            adj.setdefault(v, []).append((u, hid))
        stack: list[tuple[str, list[str]]] = [(start, [])]
        seen = {start}
        while stack:
            node, trail = stack.pop()
            for nxt, hid in adj.get(node, ()):
                if nxt in seen:
                    continue
                if nxt == goal:
                    return trail + [hid]
                seen.add(nxt)
                stack.append((nxt, trail + [hid]))
        raise GraphError(f"{start} and {goal} lie in different components")


def positive_tree(g: FoliationGraph) -> PositiveTree:
    """The graph of positive elliptic points joined by positive saddles."""
    g.require_valid()
    if g.homoclinic_edges():
        raise GraphError("positive-separatrix graph requires a connection-free instance")
    nodes = tuple(sorted(p.id for p in g.points_of_kind(ELLIPTIC) if p.sign > 0))
    links = []
    for p in sorted(g.points_of_kind(HYPERBOLIC), key=lambda p: p.id):
        if p.sign <= 0:
            continue
        feeders = []
        for slot in ("s0", "s1"):
            ref = g.edge_at_slot(p.id, slot).src
            q = g.points[ref.point]
            if ref.slot is not None or q.kind != ELLIPTIC or q.sign <= 0:
                break
            feeders.append(ref.point)
        else:
            links.append((feeders[0], feeders[1], p.id))
    return PositiveTree(nodes, tuple(links))


def unique_positive_path(g: FoliationGraph, start: str, goal: str) -> list[str]:
    """Positive saddles along the only skeleton path between two sources."""
    return positive_tree(g).path(start, goal)


# -------------------------------------------------------------------- polygons


@dataclass(frozen=True)
class PolygonCorner:
    point: str
    enter: Dart
    leave: Dart
    role: str  # "vertex" | "pseudovertex"
    sign: int


@dataclass(frozen=True)
class Polygon:
    """A union of faces whose closure is a disc."""

    face_indices: frozenset[int]
    boundary_points: tuple[str, ...]  # every point visit along the walk
    corners: tuple[PolygonCorner, ...]  # signed corners only
    embedded: bool

    @property
    def sides(self) -> int:
        return max(sum(1 for c in self.corners if c.role == "vertex"), 1)

    @property
    def signs(self) -> set[int]:
        return {c.sign for c in self.corners}

    @property
    def same_sign(self) -> bool:
        return len(self.signs) <= 1

    @property
    def sign(self) -> int:
        s = self.signs
        return next(iter(s)) if len(s) == 1 else 0

    def describe(self) -> dict:
        return {
            "faces": sorted(self.face_indices),
            "corners": [
                {"point": c.point, "role": c.role, "sign": c.sign} for c in self.corners
            ],
            "sides": self.sides,
            "embedded": self.embedded,
            "same_sign": self.same_sign,
        }


def _face_adjacency(g: FoliationGraph) -> dict[int, set[int]]:
    by_dart = {}
    for f in g.faces():
        for d in f.darts:
            by_dart[d] = f.index
    adj: dict[int, set[int]] = {f.index: set() for f in g.faces()}
    for eid in g.edges:
        a, b = by_dart[(eid, "src")], by_dart[(eid, "tgt")]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    return adj


def _closure_euler(g: FoliationGraph, face_set: frozenset[int]) -> int:
    faces = [f for f in g.faces() if f.index in face_set]
    pts = {c.point for f in faces for c in f.corners}
    eds = {d[0] for f in faces for d in f.darts}
    return len(pts) - len(eds) + len(faces)


def trace_polygon(g: FoliationGraph, face_set: frozenset[int]) -> Polygon | None:
    """Build the polygon on this face set, or None if it is not a disc."""
    faces = {f.index: f for f in g.faces()}
    if not face_set or not face_set <= set(faces):
        return None
    if len(face_set) == len(faces):
        return None  # the whole sphere
    # connectivity through shared edges
    adj = _face_adjacency(g)
    seen = {min(face_set)}
    frontier = [min(face_set)]
    while frontier:
        i = frontier.pop()
        for j in adj[i]:
            if j in face_set and j not in seen:
                seen.add(j)
                frontier.append(j)
    if seen != face_set:
        return None
    if _closure_euler(g, face_set) != 1:
        return None

    face_of: dict[Dart, int] = {}
    for f in g.faces():
        for d in f.darts:
            face_of[d] = f.index

    boundary_sides = sorted(
        d
        for d in g.darts()
        if face_of[d] in face_set and face_of[g.theta(d)] not in face_set
    )
    if not boundary_sides:
        return None

    def next_side(d: Dart) -> tuple[Dart, Dart]:
        """Departure dart at the point reached by d, hopping interior edges."""
        n = g.phi(d)
        guard = 0
        while face_of[g.theta(n)] in face_set:
            n = g.phi(g.theta(n))
            guard += 1
            if guard > 4 * len(g.edges):
                raise GraphError("polygon boundary walk failed to close")
        return g.theta(d), n

    start = boundary_sides[0]
    visits: list[tuple[str, Dart, Dart]] = []
    walked: set[Dart] = set()
    d = start
    while True:
        walked.add(d)
        enter, leave = next_side(d)
        visits.append((g.dart_point(enter), enter, leave))
        d = leave
        if d == start:
            break
    if walked != set(boundary_sides):
        return None  # more than one boundary circle (pinched or worse)

    corners: list[PolygonCorner] = []
    for q, enter, leave in visits:
        dirs = {g.dart_direction(enter), g.dart_direction(leave)}
        if len(dirs) == 2:
            continue  # boundary passes through smoothly
        p = g.points[q]
        role = "pseudovertex" if p.kind == HYPERBOLIC else "vertex"
        corners.append(PolygonCorner(q, enter, leave, role, p.sign))

    points_visited = tuple(q for q, _, _ in visits)
    embedded = len(set(points_visited)) == len(points_visited)
    return Polygon(face_set, points_visited, tuple(corners), embedded)


def enumerate_polygons(
    g: FoliationGraph,
    max_faces: int | None = None,
    embedded_only: bool = False,
) -> Iterator[Polygon]:
    """All polygons of the graph, smallest face sets first."""
    n = len(g.faces())
    if n > 20:
        raise GraphError("polygon enumeration is limited to graphs with <= 20 faces")
    limit = n if max_faces is None else min(n, max_faces)
    indices = [f.index for f in g.faces()]
    for size in range(1, limit + 1):
        for combo in itertools.combinations(indices, size):
            poly = trace_polygon(g, frozenset(combo))
            if poly is None:
                continue
            if embedded_only and not poly.embedded:
                continue
            yield poly


def find_same_sign_polygon(g: FoliationGraph) -> Polygon | None:
    """An embedded polygon whose signed corners all agree, if one exists.

    Such a polygon certifies that no taming assignment can exist: smoothing
    its corners yields a closed leaf bounding the disc.
    """
    for poly in enumerate_polygons(g, embedded_only=True):
        if poly.same_sign:
            return poly
    return None
