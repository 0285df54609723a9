"""Martelli graphs: the combinatorial encoding of a simple polyhedron whose
singular set is a disjoint union of circles.

Each vertex is a piece of the decomposition (disk, pants, Moebius strip, one
of the three Y-bundles over the circle) or a free boundary circle (``B``).
Each edge is a decomposition circle, and the two ends of an edge sit in
numbered *slots* of the pieces it glues.  For ``Y12`` slot 1 is the single
leg and slot 2 the doubled leg (the circle winding twice around the
singular circle).

Gluing orientation is stored as a per-edge sign.  In the cellular model the
circle of an edge appears with coefficient ``+1`` at its first end and
``-sign`` at its second end, so the default ``sign=+1`` is the
orientation-compatible gluing.
"""

from __future__ import annotations

import hashlib
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import (
    BadSlot,
    DuplicateId,
    GraphSyntaxError,
    UnknownEdge,
    UnknownKind,
    UnknownVertex,
)


class VertexKind(str, Enum):
    B = "B"
    D = "D"
    P = "P"
    M = "M"
    Y111 = "Y111"
    Y12 = "Y12"
    Y3 = "Y3"

    @property
    def slots(self) -> int:
        return _SLOT_COUNT[self]

    @property
    def doubled_slot(self) -> int | None:
        return DOUBLED_SLOT if self is VertexKind.Y12 else None

    def __str__(self) -> str:
        return self.value


_SLOT_COUNT = {
    VertexKind.B: 1,
    VertexKind.D: 1,
    VertexKind.M: 1,
    VertexKind.Y3: 1,
    VertexKind.Y12: 2,
    VertexKind.P: 3,
    VertexKind.Y111: 3,
}

SINGLE_SLOT = 1
DOUBLED_SLOT = 2


class End(NamedTuple):
    vertex: int
    slot: int

    def __str__(self) -> str:
        return f"{self.vertex}.{self.slot}"


@dataclass(frozen=True)
class Edge:
    end1: End
    end2: End
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"edge sign must be +1 or -1, got {self.sign!r}")
        object.__setattr__(self, "end1", End(*self.end1))
        object.__setattr__(self, "end2", End(*self.end2))

    def end(self, index: int) -> End:
        return self.end1 if index == 0 else self.end2

    def coefficient(self, index: int) -> int:
        """Coefficient of this edge's circle in the piece at end ``index``."""
        return 1 if index == 0 else -self.sign

    @property
    def is_loop(self) -> bool:
        return self.end1.vertex == self.end2.vertex


class HalfEdge(NamedTuple):
    """One end of an edge, seen from the vertex that owns the slot."""

    edge: int
    index: int  # 0 for end1, 1 for end2


def _item_hash(item: tuple) -> int:
    return int.from_bytes(hashlib.blake2b(repr(item).encode(), digest_size=16).digest(), "big")


def _vertex_item(vid: int, kind: VertexKind) -> tuple:
    return ("v", vid, kind.value)


def _edge_item(eid: int, edge: Edge) -> tuple:
    return ("e", eid, tuple(edge.end1), tuple(edge.end2), edge.sign)


_MOD = 1 << 128


class MartelliGraph:
    """Immutable slotted multigraph.

    Construction does not require well-formedness; :func:`validate` reports
    problems.  Derived indexes (slot lookup, vertices by kind, a multiset
    digest) are built once and updated incrementally by :meth:`edit`, which
    keeps long move sequences linear in the number of steps.
    """

    __slots__ = ("_vertices", "_edges", "_slot_index", "_by_kind", "_digest", "__weakref__")

    def __init__(
        self,
        vertices: Mapping[int, VertexKind | str] | None = None,
        edges: Mapping[int, Edge | tuple] | None = None,
    ):
        verts = {int(v): VertexKind(k) for v, k in (vertices or {}).items()}
        edgs = {}
        for eid, e in (edges or {}).items():
            edgs[int(eid)] = e if isinstance(e, Edge) else Edge(*e)
        slot_index: dict[End, HalfEdge] = {}
        for eid, e in edgs.items():
            for idx in (0, 1):
                slot_index.setdefault(e.end(idx), HalfEdge(eid, idx))
        by_kind: dict[VertexKind, frozenset[int]] = {}
        for kind in VertexKind:
            by_kind[kind] = frozenset(v for v, k in verts.items() if k is kind)
        digest = 0
        for v, k in verts.items():
            digest += _item_hash(_vertex_item(v, k))
        for eid, e in edgs.items():
            digest += _item_hash(_edge_item(eid, e))
        self._vertices = verts
        self._edges = edgs
        self._slot_index = slot_index
        self._by_kind = by_kind
        self._digest = digest % _MOD

    # -- read access -----------------------------------------------------

    @property
    def vertices(self) -> Mapping[int, VertexKind]:
        return _ReadOnly(self._vertices)

    @property
    def edges(self) -> Mapping[int, Edge]:
        return _ReadOnly(self._edges)

    def kind(self, v: int) -> VertexKind:
        try:
            return self._vertices[v]
        except KeyError:
            raise UnknownVertex(f"no vertex {v}") from None

    def edge(self, e: int) -> Edge:
        try:
            return self._edges[e]
        except KeyError:
            raise UnknownEdge(f"no edge {e}") from None

    def vertices_of_kind(self, kind: VertexKind) -> frozenset[int]:
        return self._by_kind[kind]

    def count(self, kind: VertexKind) -> int:
        return len(self._by_kind[kind])

    def __len__(self) -> int:
        return len(self._vertices)

    @property
    def digest(self) -> str:
        """Order-independent content hash; equal graphs have equal digests."""
        return format(self._digest, "032x")

    def at(self, v: int, slot: int) -> HalfEdge | None:
        return self._slot_index.get(End(v, slot))

    def half_edges(self, v: int) -> list[tuple[int, HalfEdge]]:
        """``(slot, half_edge)`` pairs for the wired slots of ``v``, by slot."""
        out = []
        for slot in range(1, self.kind(v).slots + 1):
            h = self._slot_index.get(End(v, slot))
            if h is not None:
                out.append((slot, h))
        return out

    def far_end(self, h: HalfEdge) -> End:
        return self._edges[h.edge].end(1 - h.index)

    def coefficient(self, h: HalfEdge) -> int:
        return self._edges[h.edge].coefficient(h.index)

    def neighbors(self, v: int) -> list[int]:
        return [self.far_end(h).vertex for _, h in self.half_edges(v)]

    def incident_edges(self, v: int) -> list[int]:
        return sorted({h.edge for _, h in self.half_edges(v)})

    def max_vertex_id(self) -> int:
        return max(self._vertices, default=0)

    def max_edge_id(self) -> int:
        return max(self._edges, default=0)

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps = []
        for start in sorted(self._vertices):
            if start in seen:
                continue
            comp = set(self._reach(start))
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def cycle_rank(self) -> int:
        """First Betti number of the underlying multigraph."""
        return len(self._edges) - len(self._vertices) + len(self.components())

    def is_tree(self) -> bool:
        return bool(self._vertices) and self.is_connected() and len(self._edges) == len(self._vertices) - 1

    def _reach(self, start: int, skip_edge: int | None = None) -> Iterator[int]:
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            yield v
            for _, h in self.half_edges(v):
                if h.edge == skip_edge:
                    continue
                w = self.far_end(h).vertex
                if w not in seen and w in self._vertices:
                    seen.add(w)
                    queue.append(w)

    def distances_from(self, root: int) -> dict[int, int]:
        dist = {root: 0}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w not in dist and w in self._vertices:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def is_disk_graph(self) -> bool:
        """True for the two-vertex graph B--D encoding the disk."""
        return (
            len(self._vertices) == 2
            and len(self._edges) == 1
            and self.count(VertexKind.B) == 1
            and self.count(VertexKind.D) == 1
        )

    # -- equality ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MartelliGraph):
            return NotImplemented
        return (
            self._digest == other._digest
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash(self._digest)

    def __repr__(self) -> str:
        return f"MartelliGraph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    # -- incremental construction -----------------------------------------

    def edit(self) -> "GraphEditor":
        return GraphEditor(self)


class _ReadOnly(Mapping):
    __slots__ = ("_d",)

    def __init__(self, d):
        self._d = d

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __contains__(self, k):
        return k in self._d


class GraphEditor:
    """Copy-on-write builder for a new graph derived from an existing one."""

    def __init__(self, base: MartelliGraph):
        self._vertices = dict(base._vertices)
        self._edges = dict(base._edges)
        self._slot_index = dict(base._slot_index)
        self._by_kind = dict(base._by_kind)
        self._digest = base._digest
        self._next_vertex = base.max_vertex_id() + 1
        self._next_edge = base.max_edge_id() + 1

    def fresh_vertex_id(self) -> int:
        vid = self._next_vertex
        self._next_vertex += 1
        return vid

    def fresh_edge_id(self) -> int:
        eid = self._next_edge
        self._next_edge += 1
        return eid

    def add_vertex(self, vid: int, kind: VertexKind) -> None:
        if vid in self._vertices:
            raise DuplicateId(f"vertex {vid} exists")
        self._vertices[vid] = kind
        self._by_kind[kind] = self._by_kind[kind] | {vid}
        self._digest += _item_hash(_vertex_item(vid, kind))

    def remove_vertex(self, vid: int) -> None:
        kind = self._vertices.pop(vid)
        self._by_kind[kind] = self._by_kind[kind] - {vid}
        self._digest -= _item_hash(_vertex_item(vid, kind))

    def add_edge(self, eid: int, edge: Edge) -> None:
        if eid in self._edges:
            raise DuplicateId(f"edge {eid} exists")
        self._edges[eid] = edge
        for idx in (0, 1):
            self._slot_index[edge.end(idx)] = HalfEdge(eid, idx)
        self._digest += _item_hash(_edge_item(eid, edge))

    def remove_edge(self, eid: int) -> Edge:
        edge = self._edges.pop(eid)
        for idx in (0, 1):
            end = edge.end(idx)
            if self._slot_index.get(end) == HalfEdge(eid, idx):
                del self._slot_index[end]
        self._digest -= _item_hash(_edge_item(eid, edge))
        return edge

    def replace_edge(self, eid: int, edge: Edge) -> None:
        self.remove_edge(eid)
        self.add_edge(eid, edge)

    def freeze(self) -> MartelliGraph:
        g = MartelliGraph.__new__(MartelliGraph)
        g._vertices = self._vertices
        g._edges = self._edges
        g._slot_index = self._slot_index
        g._by_kind = self._by_kind
        g._digest = self._digest % _MOD
        # an editor is single-use
        self._vertices = self._edges = self._slot_index = self._by_kind = None
        return g


# ---------------------------------------------------------------------------
# text format


@dataclass(frozen=True)
class GraphDocument:
    graph: MartelliGraph
    gleams: tuple[tuple[str, int], ...] = ()


_SLOT_RE = re.compile(r"^(\d+)\.(\d+)$")


def _parse_end(token: str, lineno: int) -> End:
    m = _SLOT_RE.match(token)
    if not m:
        raise GraphSyntaxError(lineno, f"expected <vertex>.<slot>, got {token!r}")
    v, slot = int(m.group(1)), int(m.group(2))
    if not 1 <= slot <= 3:
        raise BadSlot(f"line {lineno}: slot {slot} outside 1..3", line=lineno)
    return End(v, slot)


def _parse_id(token: str, lineno: int) -> int:
    if not token.isdigit() or int(token) <= 0:
        raise GraphSyntaxError(lineno, f"expected a positive integer id, got {token!r}")
    return int(token)


def parse_document(text: str) -> GraphDocument:
    vertices: dict[int, VertexKind] = {}
    edges: dict[int, Edge] = {}
    edge_lines: dict[int, int] = {}
    gleams: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "vertex":
            if len(parts) != 3:
                raise GraphSyntaxError(lineno, "usage: vertex <id> <kind>")
            vid = _parse_id(parts[1], lineno)
            try:
                kind = VertexKind(parts[2])
            except ValueError:
                raise UnknownKind(f"line {lineno}: unknown vertex kind {parts[2]!r}", line=lineno) from None
            if vid in vertices:
                raise DuplicateId(f"line {lineno}: vertex {vid} declared twice", line=lineno)
            vertices[vid] = kind
        elif head == "edge":
            if len(parts) not in (4, 5):
                raise GraphSyntaxError(lineno, "usage: edge <id> <v>.<slot> <v>.<slot> [sign=+1|-1]")
            eid = _parse_id(parts[1], lineno)
            end1 = _parse_end(parts[2], lineno)
            end2 = _parse_end(parts[3], lineno)
            sign = 1
            if len(parts) == 5:
                key, _, value = parts[4].partition("=")
                if key != "sign" or value not in ("+1", "-1", "1"):
                    raise GraphSyntaxError(lineno, f"bad sign field {parts[4]!r}")
                sign = -1 if value == "-1" else 1
            if eid in edges:
                raise DuplicateId(f"line {lineno}: edge {eid} declared twice", line=lineno)
            edges[eid] = Edge(end1, end2, sign)
            edge_lines[eid] = lineno
        elif head == "gleam":
            if len(parts) != 3:
                raise GraphSyntaxError(lineno, "usage: gleam <regionId> <k>")
            try:
                k = int(parts[2])
            except ValueError:
                raise GraphSyntaxError(lineno, f"gleam value must be an integer, got {parts[2]!r}") from None
            gleams.append((parts[1], k))
        else:
            raise GraphSyntaxError(lineno, f"unknown directive {head!r}")
    for eid, edge in edges.items():
        for end in (edge.end1, edge.end2):
            if end.vertex not in vertices:
                lineno = edge_lines[eid]
                raise UnknownVertex(f"line {lineno}: edge {eid} references vertex {end.vertex}", line=lineno)
            if end.slot > vertices[end.vertex].slots:
                lineno = edge_lines[eid]
                raise BadSlot(
                    f"line {lineno}: vertex {end.vertex} ({vertices[end.vertex]}) has no slot {end.slot}",
                    line=lineno,
                )
    return GraphDocument(MartelliGraph(vertices, edges), tuple(gleams))


def parse_graph(text: str) -> MartelliGraph:
    return parse_document(text).graph


def serialize(g: MartelliGraph, gleams: Iterable[tuple[str, int]] = ()) -> str:
    lines = [f"vertex {v} {g.vertices[v].value}" for v in sorted(g.vertices)]
    for eid in sorted(g.edges):
        e = g.edges[eid]
        suffix = " sign=-1" if e.sign == -1 else ""
        lines.append(f"edge {eid} {e.end1} {e.end2}{suffix}")
    lines.extend(f"gleam {rid} {k}" for rid, k in gleams)
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    location: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def well_formed(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


def validate(g: MartelliGraph) -> ValidationReport:
    """Check slot saturation, slot ranges and single use of every slot.

    Acyclicity is a homological property and is not checked here.
    """
    out: list[Violation] = []
    used: dict[End, int] = {}
    for eid in sorted(g.edges):
        e = g.edges[eid]
        for end in (e.end1, e.end2):
            if end.vertex not in g.vertices:
                out.append(Violation("UnknownVertex", f"edge {eid}: vertex {end.vertex}"))
                continue
            kind = g.vertices[end.vertex]
            if not 1 <= end.slot <= kind.slots:
                out.append(Violation("SlotOutOfRange", f"edge {eid}: {end} on {kind}"))
                continue
            if end in used:
                out.append(Violation("SlotReused", f"slot {end}: edges {used[end]} and {eid}"))
            else:
                used[end] = eid
    for v in sorted(g.vertices):
        kind = g.vertices[v]
        for slot in range(1, kind.slots + 1):
            if End(v, slot) not in used:
                out.append(Violation("UnsaturatedSlot", f"slot {v}.{slot} ({kind})"))
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# cutting along an edge circle


@dataclass(frozen=True)
class CutSide:
    graph: MartelliGraph
    marker_vertex: int
    marker_edge: int
    original_end: End


@dataclass(frozen=True)
class CutResult:
    """Outcome of cutting along one edge circle.

    When the edge separates, ``sides[0]`` holds the component of the edge's
    first end and ``sides[1]`` that of its second end.  Otherwise ``sides``
    has a single graph carrying both markers.
    """

    separating: bool
    sides: tuple[CutSide, ...]


def _subgraph(g: MartelliGraph, keep: set[int], drop_edge: int) -> tuple[dict, dict]:
    verts = {v: g.vertices[v] for v in keep}
    edges = {
        eid: e
        for eid, e in g.edges.items()
        if eid != drop_edge and e.end1.vertex in keep and e.end2.vertex in keep
    }
    return verts, edges


def cut_edge(g: MartelliGraph, e: int) -> CutResult:
    """Cut ``g`` along the circle of edge ``e``.

    Each freed slot is capped with a fresh ``B`` vertex (the marker) so the
    cut circle survives as a free boundary circle.  The marker edge attached
    to the first end reuses id ``e``.
    """
    edge = g.edge(e)
    a, b = edge.end1, edge.end2
    comp_a = set(g._reach(a.vertex, skip_edge=e))
    marker = g.max_vertex_id() + 1
    if b.vertex in comp_a:
        verts = dict(g.vertices)
        edges = {k: v for k, v in g.edges.items() if k != e}
        m2 = marker + 1
        e2 = g.max_edge_id() + 1
        verts[marker] = VertexKind.B
        verts[m2] = VertexKind.B
        edges[e] = Edge(a, End(marker, 1), edge.sign)
        edges[e2] = Edge(b, End(m2, 1), edge.sign)
        single = MartelliGraph(verts, edges)
        return CutResult(
            False,
            (CutSide(single, marker, e, a), CutSide(single, m2, e2, b)),
        )
    comp_b = set(g._reach(b.vertex, skip_edge=e))
    sides = []
    for end, comp in ((a, comp_a), (b, comp_b)):
        verts, edges = _subgraph(g, comp, e)
        verts[marker] = VertexKind.B
        edges[e] = Edge(end, End(marker, 1), edge.sign)
        sides.append(CutSide(MartelliGraph(verts, edges), marker, e, end))
    return CutResult(True, tuple(sides))


# ---------------------------------------------------------------------------
# DOT export


def export_dot(g: MartelliGraph, name: str = "martelli") -> str:
    lines = [f"graph {name} {{"]
    for v in sorted(g.vertices):
        kind = g.vertices[v]
        lines.append(f'  v{v} [label="{v}:{kind.value}"];')
    for eid in sorted(g.edges):
        e = g.edges[eid]
        attrs = [f'taillabel="{e.end1.slot}"', f'headlabel="{e.end2.slot}"']
        doubled = any(
            end.vertex in g.vertices and g.vertices[end.vertex].doubled_slot == end.slot
            for end in (e.end1, e.end2)
        )
        if doubled:
            attrs += ["style=bold", 'label="×2"']
        else:
            attrs.append(f'label="e{eid}"')
        if e.sign == -1:
            attrs.append("color=red")
        lines.append(f"  v{e.end1.vertex} -- v{e.end2.vertex} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


DISK_GRAPH_TEXT = "vertex 1 B\nvertex 2 D\nedge 1 1.1 2.1\n"


def disk_graph() -> MartelliGraph:
    return parse_graph(DISK_GRAPH_TEXT)
