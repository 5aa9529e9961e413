"""Core data model: directed separatrix graphs on the 2-sphere.

A :class:`FoliationGraph` records the singular points of a gradient-like
flow on the sphere together with its separatrices (and, where needed for
cellularity, *marker* leaves), plus a rotation system: the counterclockwise
cyclic order of edge-ends around every point.  Faces are traced from the
rotation system.  Validity asks, besides the local slot discipline at each
kind of point, that the surface closes up to a sphere (Euler count) and
that every face is a coherent flow box: exactly one corner where the flow
enters the face (a sink corner) and exactly one where it leaves (a source
corner).

Edge ends are addressed as *darts* ``(edge_id, "src"|"tgt")``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Sequence

ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"
EMBRYO = "embryo"
CORNER = "corner"

KINDS = (ELLIPTIC, HYPERBOLIC, EMBRYO, CORNER)
#: point kinds that carry separatrix slots and a critical level of their own
SADDLE_KINDS = (HYPERBOLIC, EMBRYO)

#: required counterclockwise slot pattern around a hyperbolic point
HYPERBOLIC_SLOTS = ("s0", "u0", "s1", "u1")

Dart = tuple[str, str]  # (edge id, "src" | "tgt")


class GraphError(ValueError):
    """A structure failed validation where validity was required."""


@dataclass(frozen=True)
class SingularPoint:
    id: str
    kind: str
    sign: int  # +1 / -1; 0 for corner remnants

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise GraphError(f"unknown point kind {self.kind!r}")
        if self.kind == CORNER:
            if self.sign != 0:
                raise GraphError("corner points carry sign 0")
        elif self.sign not in (-1, 1):
            raise GraphError(f"point {self.id}: sign must be +1 or -1")


@dataclass(frozen=True)
class EndRef:
    """One end of an edge: the point it attaches to and the slot it occupies.

    ``slot`` is ``None`` for the free attachments at an elliptic point,
    ``"zone"`` for free attachments inside an embryo's parabolic sector,
    and a named separatrix slot otherwise.
    """

    point: str
    slot: str | None = None


@dataclass(frozen=True)
class Separatrix:
    """A directed edge of the graph, oriented along the flow."""

    id: str
    src: EndRef
    dst: EndRef
    marker: bool = False


def end_direction(point: SingularPoint, slot: str | None) -> str:
    """Return ``"out"`` if an end in this slot emits flow, ``"in"`` if it absorbs.

    Raises :class:`GraphError` for a slot that does not exist on the kind.
    """
    kind, sign = point.kind, point.sign
    if kind == ELLIPTIC:
        if slot is not None:
            raise GraphError(f"elliptic point {point.id} has no slot {slot!r}")
        return "out" if sign > 0 else "in"
    if kind == HYPERBOLIC:
        if slot in ("s0", "s1"):
            return "in"
        if slot in ("u0", "u1"):
            return "out"
        raise GraphError(f"hyperbolic point {point.id} has no slot {slot!r}")
    if kind == EMBRYO:
        if sign > 0:
            if slot == "in":
                return "in"
            if slot in ("b0", "b1", "zone"):
                return "out"
        else:
            if slot == "out":
                return "out"
            if slot in ("b0", "b1", "zone"):
                return "in"
        raise GraphError(f"embryo point {point.id} has no slot {slot!r}")
    if kind == CORNER:
        if slot == "in":
            return "in"
        if slot == "out":
            return "out"
        raise GraphError(f"corner point {point.id} has no slot {slot!r}")
    raise GraphError(f"unknown kind {kind!r}")


def _slot_letter(point: SingularPoint, slot: str | None) -> str:
    """Slot kind collapsed to one letter, erasing arbitrary 0/1 labels."""
    if slot is None:
        return "f"
    if slot in ("s0", "s1"):
        return "s"
    if slot in ("u0", "u1"):
        return "u"
    if slot in ("b0", "b1"):
        return "b"
    if slot == "zone":
        return "z"
    if slot == "in":
        return "i"
    if slot == "out":
        return "o"
    return "?"


@dataclass(frozen=True)
class Corner:
    """An angular sector of a face at one of its boundary points.

    ``enter`` is the dart along which the face walk arrives at ``point``,
    ``leave`` the dart along which it departs (the rotation successor of
    ``enter``).  ``flavor`` is ``"source"`` (both germs outgoing),
    ``"sink"`` (both incoming) or ``"through"``.
    """

    point: str
    enter: Dart
    leave: Dart
    flavor: str


@dataclass(frozen=True)
class Face:
    index: int
    darts: tuple[Dart, ...]
    corners: tuple[Corner, ...]

    @property
    def source_corners(self) -> tuple[Corner, ...]:
        return tuple(c for c in self.corners if c.flavor == "source")

    @property
    def sink_corners(self) -> tuple[Corner, ...]:
        return tuple(c for c in self.corners if c.flavor == "sink")

    @property
    def source_point(self) -> str:
        (c,) = self.source_corners
        return c.point

    @property
    def sink_point(self) -> str:
        (c,) = self.sink_corners
        return c.point


class FoliationGraph:
    """Immutable-by-convention separatrix graph with a rotation system.

    ``rotation`` maps every point id to the counterclockwise cyclic tuple of
    darts around it.  Construction is permissive; call :meth:`validate` (or
    :meth:`require_valid`) to check the full battery of structural rules.
    """

    def __init__(
        self,
        points: Mapping[str, SingularPoint] | Sequence[SingularPoint],
        edges: Mapping[str, Separatrix] | Sequence[Separatrix],
        rotation: Mapping[str, Sequence[Dart]],
    ) -> None:
        if not isinstance(points, Mapping):
            points = {p.id: p for p in points}
        if not isinstance(edges, Mapping):
            edges = {e.id: e for e in edges}
        self.points: dict[str, SingularPoint] = dict(points)
        self.edges: dict[str, Separatrix] = dict(edges)
        self.rotation: dict[str, tuple[Dart, ...]] = {
            pid: tuple((eid, end) for eid, end in seq) for pid, seq in rotation.items()
        }
        self._faces: tuple[Face, ...] | None = None
        self._canon: str | None = None

    # ----------------------------------------------------------------- darts

    def darts(self) -> list[Dart]:
        out: list[Dart] = []
        for eid in self.edges:
            out.append((eid, "src"))
            out.append((eid, "tgt"))
        return out

    def end_ref(self, dart: Dart) -> EndRef:
        eid, end = dart
        edge = self.edges[eid]
        return edge.src if end == "src" else edge.dst

    def dart_point(self, dart: Dart) -> str:
        return self.end_ref(dart).point

    def dart_slot(self, dart: Dart) -> str | None:
        return self.end_ref(dart).slot

    def dart_direction(self, dart: Dart) -> str:
        """``"out"`` if the flow leaves the point along this end."""
        ref = self.end_ref(dart)
        return end_direction(self.points[ref.point], ref.slot)

    @staticmethod
    def theta(dart: Dart) -> Dart:
        eid, end = dart
        return (eid, "tgt" if end == "src" else "src")

    def sigma(self, dart: Dart) -> Dart:
        """Rotation successor: next dart counterclockwise at the same point."""
        seq = self.rotation[self.dart_point(dart)]
        i = seq.index(dart)
        return seq[(i + 1) % len(seq)]

    def sigma_inv(self, dart: Dart) -> Dart:
        seq = self.rotation[self.dart_point(dart)]
        i = seq.index(dart)
        return seq[(i - 1) % len(seq)]

    def phi(self, dart: Dart) -> Dart:
        """Face-walk successor: cross the edge, then turn counterclockwise."""
        return self.sigma(self.theta(dart))

    # ----------------------------------------------------------------- faces

    def faces(self) -> tuple[Face, ...]:
        if self._faces is None:
            self._faces = self._trace_faces()
        return self._faces

    def _trace_faces(self) -> tuple[Face, ...]:
        seen: set[Dart] = set()
        faces: list[Face] = []
        for start in sorted(self.darts()):
            if start in seen:
                continue
            orbit: list[Dart] = []
            d = start
            while True:
                orbit.append(d)
                seen.add(d)
                d = self.phi(d)
                if d == start:
                    break
                if d in seen:
                    raise GraphError("rotation system is not a permutation of darts")
            corners = []
            for d in orbit:
                enter = self.theta(d)
                leave = self.phi(d)
                dirs = {self.dart_direction(enter), self.dart_direction(leave)}
                if dirs == {"out"}:
                    flavor = "source"
                elif dirs == {"in"}:
                    flavor = "sink"
                else:
                    flavor = "through"
                corners.append(Corner(self.dart_point(enter), enter, leave, flavor))
            faces.append(Face(len(faces), tuple(orbit), tuple(corners)))
        return tuple(faces)

    def face_of_dart(self, dart: Dart) -> Face:
        for f in self.faces():
            if dart in f.darts:
                return f
        raise GraphError(f"dart {dart} not on any face")

    def face_at_corner(self, enter: Dart) -> Face:
        """The face whose walk arrives at ``enter`` (i.e. contains theta(enter))."""
        return self.face_of_dart(self.theta(enter))

    # ------------------------------------------------------------ validation

    def validate(self) -> list[str]:
        """Return a list of violation messages; empty means valid."""
        problems: list[str] = []
        for pid, p in self.points.items():
            if pid != p.id:
                problems.append(f"point key {pid} != id {p.id}")
        for eid, e in self.edges.items():
            if eid != e.id:
                problems.append(f"edge key {eid} != id {e.id}")
            for ref in (e.src, e.dst):
                if ref.point not in self.points:
                    problems.append(f"edge {eid}: unknown point {ref.point}")
        if problems:
            return problems

        # end directions and slot discipline
        for eid, e in self.edges.items():
            try:
                d_src = end_direction(self.points[e.src.point], e.src.slot)
                d_dst = end_direction(self.points[e.dst.point], e.dst.slot)
            except GraphError as exc:
                problems.append(f"edge {eid}: {exc}")
                continue
            if d_src != "out":
                problems.append(f"edge {eid}: src end sits in an absorbing slot")
            if d_dst != "in":
                problems.append(f"edge {eid}: dst end sits in an emitting slot")
            free = {None, "zone"}
            if e.marker and not (e.src.slot in free and e.dst.slot in free):
                problems.append(f"edge {eid}: marker leaves may not occupy named slots")
            if not e.marker and e.src.slot in free and e.dst.slot in free:
                problems.append(f"edge {eid}: slot-free edge must be a marker leaf")

        # named slots occupied exactly once, with the full complement present
        occupancy: dict[tuple[str, str], int] = {}
        for e in self.edges.values():
            for ref in (e.src, e.dst):
                if ref.slot not in (None, "zone"):
                    occupancy[(ref.point, ref.slot)] = occupancy.get((ref.point, ref.slot), 0) + 1
        for (pid, slot), n in occupancy.items():
            if n > 1:
                problems.append(f"slot {pid}.{slot} occupied {n} times")
        for pid, p in self.points.items():
            if p.kind == HYPERBOLIC:
                needed = set(HYPERBOLIC_SLOTS)
            elif p.kind == EMBRYO:
                needed = {"in" if p.sign > 0 else "out", "b0", "b1"}
            elif p.kind == CORNER:
                needed = {"in", "out"}
            else:
                needed = set()
            for slot in needed:
                if (pid, slot) not in occupancy:
                    problems.append(f"slot {pid}.{slot} is vacant")
        if problems:
            return problems

        # rotation tuples are exactly the incident darts, each point nonempty
        incident: dict[str, set[Dart]] = {pid: set() for pid in self.points}
        for eid, e in self.edges.items():
            incident[e.src.point].add((eid, "src"))
            incident[e.dst.point].add((eid, "tgt"))
        for pid in self.points:
            seq = self.rotation.get(pid)
            if seq is None:
                problems.append(f"point {pid}: missing rotation")
                continue
            if len(set(seq)) != len(seq):
                problems.append(f"point {pid}: repeated dart in rotation")
            if set(seq) != incident[pid]:
                problems.append(f"point {pid}: rotation does not list its incident ends")
            if not seq:
                problems.append(f"point {pid}: isolated (no incident ends)")
        for pid in self.rotation:
            if pid not in self.points:
                problems.append(f"rotation for unknown point {pid}")
        if problems:
            return problems

        # local cyclic patterns at saddle-type points
        for pid, p in self.points.items():
            seq = self.rotation[pid]
            slots = [self.dart_slot(d) for d in seq]
            if p.kind == HYPERBOLIC:
                if len(seq) != 4:
                    problems.append(f"hyperbolic {pid}: degree {len(seq)} != 4")
                    continue
                rolled = [
                    tuple(slots[(i + k) % 4] for k in range(4)) for i in range(4)
                ]
                if tuple(HYPERBOLIC_SLOTS) not in rolled:
                    problems.append(f"hyperbolic {pid}: rotation must read s0,u0,s1,u1")
            elif p.kind == EMBRYO:
                anchor = "in" if p.sign > 0 else "out"
                if anchor not in slots:
                    problems.append(f"embryo {pid}: missing {anchor} end")
                    continue
                i = slots.index(anchor)
                rolled = [slots[(i + k) % len(slots)] for k in range(len(slots))]
                ok = (
                    len(rolled) >= 3
                    and rolled[0] == anchor
                    and rolled[1] == "b0"
                    and rolled[-1] == "b1"
                    and all(s == "zone" for s in rolled[2:-1])
                )
                if not ok:
                    problems.append(
                        f"embryo {pid}: rotation must read {anchor},b0,zone...,b1"
                    )
            elif p.kind == CORNER:
                if len(seq) != 2:
                    problems.append(f"corner {pid}: degree {len(seq)} != 2")
            else:
                if any(s is not None for s in slots):
                    problems.append(f"elliptic {pid}: ends must be slot-free")
        if problems:
            return problems

        # no closed broken leaves: chains through corner points must not cycle
        for pid, p in self.points.items():
            if p.kind != CORNER:
                continue
            hops = 0
            cur = pid
            while self.points[cur].kind == CORNER:
                out_edge = next(
                    e for e in self.edges.values() if e.src == EndRef(cur, "out")
                )
                cur = out_edge.dst.point
                hops += 1
                if cur == pid:
                    problems.append(f"corner {pid}: lies on a closed broken leaf")
                    break
                if hops > len(self.points):
                    break
        if problems:
            return problems

        # connectivity
        if self.points:
            seen = {next(iter(sorted(self.points)))}
            frontier = list(seen)
            while frontier:
                pid = frontier.pop()
                for d in self.rotation[pid]:
                    q = self.dart_point(self.theta(d))
                    if q not in seen:
                        seen.add(q)
                        frontier.append(q)
            if seen != set(self.points):
                problems.append("graph is not connected")
        if problems:
            return problems

        # sphere closure and flow-coherent faces
        try:
            faces = self.faces()
        except GraphError as exc:
            return [str(exc)]
        euler = len(self.points) - len(self.edges) + len(faces)
        if euler != 2:
            problems.append(f"Euler count V-E+F = {euler} != 2 (not a sphere)")
        for f in faces:
            ns, nk = len(f.source_corners), len(f.sink_corners)
            if (ns, nk) != (1, 1):
                problems.append(
                    f"face {f.index}: {ns} source / {nk} sink corners (need 1/1)"
                )
        return problems

    @property
    def is_valid(self) -> bool:
        return not self.validate()

    def require_valid(self) -> "FoliationGraph":
        problems = self.validate()
        if problems:
            raise GraphError("; ".join(problems))
        return self

    # ----------------------------------------------------------- conveniences

    def points_of_kind(self, kind: str) -> list[SingularPoint]:
        return [p for p in self.points.values() if p.kind == kind]

    def saddle_points(self) -> list[SingularPoint]:
        return [p for p in self.points.values() if p.kind in SADDLE_KINDS]

    def edge_at_slot(self, pid: str, slot: str) -> Separatrix:
        for e in self.edges.values():
            if e.src == EndRef(pid, slot) or e.dst == EndRef(pid, slot):
                return e
        raise GraphError(f"slot {pid}.{slot} is vacant")

    def edges_at_point(self, pid: str) -> list[Separatrix]:
        return [
            e for e in self.edges.values() if pid in (e.src.point, e.dst.point)
        ]

    def is_homoclinic(self, eid: str) -> bool:
        """True if both endpoints are saddle-type points (a saddle connection)."""
        e = self.edges[eid]
        return (
            self.points[e.src.point].kind in SADDLE_KINDS
            and self.points[e.dst.point].kind in SADDLE_KINDS
        )

    def homoclinic_edges(self) -> list[str]:
        return sorted(eid for eid in self.edges if self.is_homoclinic(eid))

    # ------------------------------------------------------- transformations

    def relabel(self, point_map: Mapping[str, str], edge_map: Mapping[str, str]) -> "FoliationGraph":
        pm = dict(point_map)
        em = dict(edge_map)
        points = {
            pm.get(pid, pid): replace(p, id=pm.get(pid, pid))
            for pid, p in self.points.items()
        }
        edges = {}
        for eid, e in self.edges.items():
            nid = em.get(eid, eid)
            edges[nid] = Separatrix(
                nid,
                EndRef(pm.get(e.src.point, e.src.point), e.src.slot),
                EndRef(pm.get(e.dst.point, e.dst.point), e.dst.slot),
                e.marker,
            )
        rotation = {
            pm.get(pid, pid): tuple((em.get(eid, eid), end) for eid, end in seq)
            for pid, seq in self.rotation.items()
        }
        return FoliationGraph(points, edges, rotation)

    def reverse(self) -> "FoliationGraph":
        """The time-reversed flow: signs flip, stable and unstable swap.

        Rotation order is kept (reversal preserves the orientation of the
        sphere); slot names at hyperbolic points are re-normalized so the
        counterclockwise pattern reads s0,u0,s1,u1 again.
        """
        slot_map: dict[tuple[str, str | None], str | None] = {}
        points: dict[str, SingularPoint] = {}
        for pid, p in self.points.items():
            sign = -p.sign if p.kind != CORNER else 0
            points[pid] = SingularPoint(pid, p.kind, sign)
            if p.kind == HYPERBOLIC:
                seq = self.rotation[pid]
                # old unstable slots become stable; start the pattern at one
                start = next(
                    i for i, d in enumerate(seq) if self.dart_slot(d) in ("u0", "u1")
                )
                for k in range(4):
                    old = self.dart_slot(seq[(start + k) % 4])
                    slot_map[(pid, old)] = HYPERBOLIC_SLOTS[k]
            elif p.kind == EMBRYO:
                slot_map[(pid, "in" if p.sign > 0 else "out")] = (
                    "out" if p.sign > 0 else "in"
                )
                slot_map[(pid, "b0")] = "b0"
                slot_map[(pid, "b1")] = "b1"
                slot_map[(pid, "zone")] = "zone"
            elif p.kind == CORNER:
                slot_map[(pid, "in")] = "out"
                slot_map[(pid, "out")] = "in"

        def flip(ref: EndRef) -> EndRef:
            return EndRef(ref.point, slot_map.get((ref.point, ref.slot), ref.slot))

        edges = {
            eid: Separatrix(eid, flip(e.dst), flip(e.src), e.marker)
            for eid, e in self.edges.items()
        }
        rotation = {
            pid: tuple(self.theta(d) for d in seq) for pid, seq in self.rotation.items()
        }
        return FoliationGraph(points, edges, rotation)

    def without_edge(self, eid: str) -> "FoliationGraph":
        edges = {k: v for k, v in self.edges.items() if k != eid}
        rotation = {
            pid: tuple(d for d in seq if d[0] != eid)
            for pid, seq in self.rotation.items()
        }
        return FoliationGraph(self.points, edges, rotation)

    def marker_reduce(self) -> "FoliationGraph":
        """Greedily delete marker leaves while the graph stays valid."""
        g = self
        changed = True
        while changed:
            changed = False
            for eid in sorted(e for e, s in g.edges.items() if s.marker):
                candidate = g.without_edge(eid)
                if candidate.is_valid:
                    g = candidate
                    changed = True
                    break
        return g

    # ------------------------------------------------------- canonical form

    def canonical_form(self) -> str:
        """A string invariant that is equal exactly for isomorphic graphs.

        Isomorphism means: a bijection of points and edges preserving kinds,
        signs, marker flags, flow directions, slot kinds (the arbitrary 0/1
        labels on stable/unstable/boundary slots are erased) and the
        counterclockwise rotation order.  Computed as the minimum, over all
        starting darts, of a deterministic breadth-first encoding.
        """
        if self._canon is not None:
            return self._canon
        darts = sorted(self.darts())
        if not darts:
            self._canon = "empty"
            return self._canon
        best: str | None = None
        for start in darts:
            enc = self._encode_from(start)
            if best is None or enc < best:
                best = enc
        assert best is not None
        self._canon = best
        return best

    def _encode_from(self, start: Dart) -> str:
        index: dict[Dart, int] = {}
        order: list[Dart] = []

        def visit(d: Dart) -> None:
            if d not in index:
                index[d] = len(order)
                order.append(d)

        visit(start)
        i = 0
        while i < len(order):
            d = order[i]
            visit(self.theta(d))
            visit(self.sigma(d))
            i += 1

        point_index: dict[str, int] = {}
        for d in order:
            pid = self.dart_point(d)
            if pid not in point_index:
                point_index[pid] = len(point_index)

        point_bits: list[str] = []
        for pid in sorted(point_index, key=point_index.get):  # type: ignore[arg-type]
            p = self.points[pid]
            point_bits.append(f"{p.kind[0]}{p.sign:+d}")
        dart_bits: list[str] = []
        for d in order:
            eid, end = d
            e = self.edges[eid]
            ref = self.end_ref(d)
            dart_bits.append(
                ",".join(
                    (
                        str(point_index[ref.point]),
                        _slot_letter(self.points[ref.point], ref.slot),
                        "S" if end == "src" else "T",
                        str(index[self.theta(d)]),
                        str(index[self.sigma(d)]),
                        "m" if e.marker else "-",
                    )
                )
            )
        return "|".join(point_bits) + "||" + "|".join(dart_bits)

    def is_isomorphic(self, other: "FoliationGraph") -> bool:
        return self.canonical_form() == other.canonical_form()

    # --------------------------------------------------------- serialization

    def to_data(self) -> dict:
        return {
            "points": [
                {"id": p.id, "kind": p.kind, "sign": p.sign}
                for p in sorted(self.points.values(), key=lambda p: p.id)
            ],
            "edges": [
                {
                    "id": e.id,
                    "src": {"point": e.src.point, "slot": e.src.slot},
                    "dst": {"point": e.dst.point, "slot": e.dst.slot},
                    "marker": e.marker,
                }
                for e in sorted(self.edges.values(), key=lambda e: e.id)
            ],
            "rotation": {
                pid: [[eid, end] for eid, end in seq]
                for pid, seq in sorted(self.rotation.items())
            },
        }

    @classmethod
    def from_data(cls, data: Mapping) -> "FoliationGraph":
        points = [
            SingularPoint(d["id"], d["kind"], int(d["sign"])) for d in data["points"]
        ]
        edges = [
            Separatrix(
                d["id"],
                EndRef(d["src"]["point"], d["src"].get("slot")),
                EndRef(d["dst"]["point"], d["dst"].get("slot")),
                bool(d.get("marker", False)),
            )
            for d in data["edges"]
        ]
        rotation = {
            pid: tuple((eid, end) for eid, end in seq)
            for pid, seq in data["rotation"].items()
        }
        return cls(points, edges, rotation)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"FoliationGraph(V={len(self.points)}, E={len(self.edges)}, "
            f"F={len(self.faces()) if self.is_valid else '?'})"
        )


def build(
    points: Sequence[tuple[str, str, int]],
    edges: Sequence[tuple],
    rotation: Mapping[str, Sequence[Dart]],
) -> FoliationGraph:
    """Compact constructor used by fixtures and tests.

    ``points``: (id, kind, sign) triples.
    ``edges``: (id, src_point, src_slot, dst_point, dst_slot[, marker]).
    """
    ps = [SingularPoint(*t) for t in points]
    es = []
    for t in edges:
        eid, sp, ss, dp, ds = t[:5]
        marker = bool(t[5]) if len(t) > 5 else False
        es.append(Separatrix(eid, EndRef(sp, ss), EndRef(dp, ds), marker))
    return FoliationGraph(ps, es, rotation)
