"""Collapse an acyclic graph onto the disk graph ``B--D``.

The loop follows the classical argument: pick the disk with the smallest id
as root, take the ``Y111`` farthest from it, find a boundary vertex in one
of its two outer subtrees whose cut side is a homology circle, and drive
that boundary vertex inward with collapse moves until the ``Y111`` is
eaten by move A.  Once no ``Y111`` is left, any boundary vertex is driven
until it meets a disk.

Every committed move strictly decreases the measure
``(vertex count, length of the pants walk)``; IH moves keep the vertex
count and shorten the walk, all other moves remove vertices.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import (
    AdjacentBoundaryPair,
    InternalNoProgress,
    InvariantViolation,
    MalformedGraph,
    NoBoundaryVertex,
    NoDiskPiece,
    NoHomologyS1Subtree,
    NotAcyclic,
    NotConnected,
    ShadowError,
    WrongSlot,
)
from .graph import DOUBLED_SLOT, HalfEdge, MartelliGraph, VertexKind, cut_edge, validate
from .homology import homology_profile, is_acyclic, split_classification
from .moves import Move, MoveKind, MoveRecord, apply_move
from .regions import GleamLedger, init_gleams, transfer_gleams

K = VertexKind
_PASSABLE = (K.P, K.Y111)


def find_root(g: MartelliGraph, check: bool = True) -> int:
    if check and not is_acyclic(g):
        raise NotAcyclic("root search needs an acyclic graph")
    disks = g.vertices_of_kind(K.D)
    if not disks:
        raise NoDiskPiece("no disk piece; the graph cannot be acyclic")
    return min(disks)


def farthest_y111(g: MartelliGraph, root: int) -> int | None:
    ys = g.vertices_of_kind(K.Y111)
    if not ys:
        return None
    dist = g.distances_from(root)
    return max(ys, key=lambda v: (dist.get(v, -1), -v))


def select_target_subtree(g: MartelliGraph, v0: int, root: int | None = None) -> tuple[int, int]:
    """Return ``(edge id, boundary vertex)`` for an outer subtree of ``v0``.

    The subtree is identified by the edge joining it to ``v0``; it is the
    first (by edge id) whose cut side is a homology circle generated by the
    cut.  The boundary vertex is the smallest-id ``B`` inside it.
    """
    if root is None:
        root = find_root(g, check=False)
    dist = g.distances_from(root)
    outer = [h for _, h in g.half_edges(v0) if dist.get(g.far_end(h).vertex, -1) > dist[v0]]
    for h in sorted(outer, key=lambda h: h.edge):
        cut = cut_edge(g, h.edge)
        side_index = 1 - h.index  # the side holding the far end
        report = split_classification(g, h.edge, cut)
        if report.s1_side != side_index or not report.generator_ok:
            continue
        side = cut.sides[side_index]
        bs = [v for v in side.graph.vertices_of_kind(K.B) if v != side.marker_vertex]
        if not bs:
            raise NoBoundaryVertex(f"subtree behind edge {h.edge} has no boundary vertex")
        return h.edge, min(bs)
    raise NoHomologyS1Subtree(f"no outer subtree of {v0} is a homology circle")


@dataclass(frozen=True)
class _Step:
    move: Move | None
    walk: int


def _ih_variant(g: MartelliGraph, e: int, carried: HalfEdge, target: HalfEdge) -> int:
    """The IH variant that puts half-edges ``carried`` and ``target`` on one pants."""
    edge = g.edges[e]
    p1, p2 = edge.end1.vertex, edge.end2.vertex
    w, x = [h for _, h in g.half_edges(p1) if h != HalfEdge(e, 0)]
    y, z = [h for _, h in g.half_edges(p2) if h != HalfEdge(e, 1)]
    for variant, pairs in ((1, ({w, y}, {x, z})), (2, ({w, z}, {x, y}))):
        if any({carried, target} == p for p in pairs):
            return variant
    raise InvariantViolation(f"no IH variant on edge {e} pairs {carried} with {target}")


def _pants_walk(g: MartelliGraph, b: int, start: int) -> tuple[list[tuple[int, HalfEdge]], HalfEdge]:
    """Shortest walk through pants from ``start`` to a pants with a neighbor
    that is neither a pants nor a ``Y111`` (and not ``b``).

    Returns the walk as ``(vertex, half-edge used to leave it)`` pairs and
    the half-edge at the final pants that leads out of the cluster.
    """
    parent: dict[int, tuple[int, HalfEdge] | None] = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        exits = []
        for _, h in g.half_edges(u):
            nb = g.far_end(h).vertex
            if nb == b:
                continue
            if g.vertices[nb] not in _PASSABLE:
                exits.append((nb, h))
            elif g.vertices[nb] is K.P and nb not in parent:
                parent[nb] = (u, h)
                queue.append(nb)
        if exits and u != start:
            path = []
            node = u
            while parent[node] is not None:
                prev, h = parent[node]
                path.append((prev, h))
                node = prev
            path.reverse()
            return path, min(exits)[1]
    raise InternalNoProgress(f"pants cluster of {start} has no exit; input is not acyclic")


def _next_move(g: MartelliGraph, b: int, root: int | None) -> _Step:
    hb = g.at(b, 1)
    far = g.far_end(hb)
    n = far.vertex
    kind = g.vertices[n]
    if kind is K.Y111:
        return _Step(Move(MoveKind.A, (b, n)), 0)
    if kind is K.Y12:
        if far.slot != DOUBLED_SLOT:
            raise WrongSlot(f"boundary {b} is glued to the single slot of {n}")
        return _Step(Move(MoveKind.B, (b, n)), 0)
    if kind is K.D:
        return _Step(None, 0)
    if kind is K.B:
        raise AdjacentBoundaryPair(f"boundary vertices {b} and {n} are joined (an annulus)")
    if kind is not K.P:
        raise NotAcyclic(f"boundary {b} meets a {kind.value} piece")
    others = [h for _, h in g.half_edges(n) if h != HalfEdge(hb.edge, 1 - hb.index)]
    ends = [(g.far_end(h), g.vertices[g.far_end(h).vertex]) for h in others]
    doubled = sorted(end.vertex for end, k in ends if k is K.Y12 and end.slot == DOUBLED_SLOT)
    if doubled:
        return _Step(Move(MoveKind.C, (b, n, doubled[0])), 0)
    disks = sorted(end.vertex for end, k in ends if k is K.D)
    if disks:
        # keep the root disk in place when there is a choice
        d = next((x for x in disks if x != root), disks[0])
        return _Step(Move(MoveKind.YV, (n, d)), 0)
    if any(k is K.B for _, k in ends):
        raise AdjacentBoundaryPair(f"pants {n} is adjacent to two boundary vertices")
    if any(k is K.Y12 for _, k in ends):
        raise WrongSlot(f"pants {n} next to boundary {b} meets the single slot of a Y12")
    if any(k not in _PASSABLE for _, k in ends):
        raise NotAcyclic(f"pants {n} meets a Moebius or Y3 piece")
    path, exit_h = _pants_walk(g, b, n)
    q0, h01 = path[0]
    target = path[1][1] if len(path) > 1 else exit_h
    target_half = HalfEdge(target.edge, target.index)
    carried = HalfEdge(hb.edge, 1 - hb.index)
    variant = _ih_variant(g, h01.edge, carried, target_half)
    return _Step(Move(MoveKind.IH, (h01.edge, variant)), len(path))


def drive_boundary(g: MartelliGraph, b: int, v0: int | None = None, root: int | None = None) -> Move | None:
    """Next move pushing boundary vertex ``b`` inward; ``None`` once ``b`` meets a disk.

    ``v0`` is accepted for symmetry with the proof; the choice depends only
    on the neighborhood of ``b``.
    """
    return _next_move(g, b, root).move


@dataclass(frozen=True)
class CollapseCertificate:
    initial_digest: str
    initial_ledger: GleamLedger
    steps: tuple[MoveRecord, ...]
    final_digest: str
    ledger_trail: tuple[str, ...]
    measures: tuple[tuple[int, int], ...] = ()
    ledger_snapshots: tuple[dict, ...] = field(default=(), repr=False)

    @property
    def trace(self) -> list[str]:
        return [str(r.move) for r in self.steps]

    def to_json(self) -> dict:
        return {
            "initial": self.initial_digest,
            "final": self.final_digest,
            "initial_ledger": self.initial_ledger.to_json(),
            "steps": [
                {**r.to_json(), "measure": list(m), "ledger": snap, "ledger_hash": h}
                for r, m, snap, h in zip(
                    self.steps,
                    self.measures or [()] * len(self.steps),
                    self.ledger_snapshots or [None] * len(self.steps),
                    self.ledger_trail,
                )
            ],
        }


def _assertion_suite(g: MartelliGraph) -> list[str]:
    problems = []
    if not g.is_tree():
        problems.append("graph is not a tree")
    if g.count(K.Y3):
        problems.append("contains a Y3 vertex")
    if g.count(K.M):
        problems.append("contains a Moebius vertex")
    if not g.count(K.D):
        problems.append("no disk vertex")
    if not g.count(K.B):
        problems.append("no boundary vertex")
    return problems


def reduce_to_disk(
    g: MartelliGraph,
    ledger: GleamLedger | None = None,
    check_invariants: bool = False,
    keep_snapshots: bool = False,
) -> CollapseCertificate:
    report = validate(g)
    if not report.well_formed:
        raise MalformedGraph(f"{len(report.violations)} violation(s): {report.violations[0]}")
    if not g.is_connected():
        raise NotConnected("reduction needs a connected graph")
    if not is_acyclic(g):
        raise NotAcyclic("graph does not encode an acyclic polyhedron")
    if ledger is None:
        ledger = init_gleams(g)
    elif ledger.graph_digest != g.digest:
        raise ShadowError("ledger does not belong to this graph")
    initial = (g.digest, ledger)
    steps: list[MoveRecord] = []
    trail: list[str] = []
    snapshots: list[dict] = []
    measures: list[tuple[int, int]] = []
    pinned: tuple[int, int | None] | None = None
    while not g.is_disk_graph():
        if pinned is None:
            root = find_root(g, check=False)
            v0 = farthest_y111(g, root)
            if v0 is not None:
                _, b = select_target_subtree(g, v0, root)
            else:
                bs = g.vertices_of_kind(K.B)
                if not bs:
                    raise NoBoundaryVertex("acyclic graph without boundary")
                b = min(bs)
        else:
            b, root = pinned
        step = _next_move(g, b, root)
        if step.move is None:
            raise NotConnected(f"boundary {b} caps a disk but other vertices remain")
        measure = (len(g), step.walk)
        if measures and not measure < measures[-1]:
            raise InternalNoProgress(f"measure {measure} did not drop below {measures[-1]}")
        after, rec = apply_move(g, step.move)
        ledger = transfer_gleams(ledger, rec)
        if check_invariants:
            problems = _assertion_suite(after)
            if not homology_profile(after).acyclic:
                problems.append("intermediate graph is not acyclic")
            problems += ledger.violations()
            if problems:
                raise InvariantViolation(f"after {rec.move}: {'; '.join(problems)}")
        pinned = (b, root) if step.move.kind is MoveKind.IH else None
        measures.append(measure)
        steps.append(rec.detach())
        trail.append(ledger.snapshot_hash())
        if keep_snapshots:
            snapshots.append(ledger.to_json())
        g = after
    if ledger.entries:
        raise InvariantViolation("live gleam entries remain on the disk graph")
    return CollapseCertificate(
        initial[0], initial[1], tuple(steps), g.digest, tuple(trail), tuple(measures), tuple(snapshots)
    )


@dataclass(frozen=True)
class Verification:
    ok: bool
    diagnostic: str = ""
    step: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(g0: MartelliGraph, cert: CollapseCertificate, check_homology: bool = True) -> Verification:
    """Replay ``cert`` from ``g0`` with full validation."""
    if cert.initial_digest != g0.digest:
        return Verification(False, "ReplayMismatch: initial graph differs", 0)
    ledger = cert.initial_ledger
    if ledger.graph_digest != g0.digest:
        return Verification(False, "ReplayMismatch: initial ledger belongs to another graph", 0)
    if len(cert.ledger_trail) != len(cert.steps):
        return Verification(False, "ReplayMismatch: ledger trail length differs from step count")
    g = g0
    profile = homology_profile(g) if check_homology else None
    for i, rec in enumerate(cert.steps):
        if rec.before_digest != g.digest:
            return Verification(False, f"ReplayMismatch: step {i} expects another graph", i)
        try:
            after, replay = apply_move(g, rec.move)
        except ShadowError as exc:
            return Verification(False, f"PatternMismatch at step {i}: {exc}", i)
        if after.digest != rec.after_digest:
            return Verification(False, f"ReplayMismatch: step {i} produced a different graph", i)
        if not validate(after).well_formed:
            return Verification(False, f"step {i} produced a malformed graph", i)
        if check_homology:
            new_profile = homology_profile(after)
            if new_profile != profile:
                return Verification(False, f"HomologyChanged at step {i}", i)
        try:
            ledger = transfer_gleams(ledger, replay)
        except ShadowError as exc:
            return Verification(False, f"LedgerError at step {i}: {exc}", i)
        problems = ledger.violations()
        if problems:
            return Verification(False, f"LedgerViolation at step {i}: {problems[0]}", i)
        if ledger.snapshot_hash() != cert.ledger_trail[i]:
            return Verification(False, f"ReplayMismatch: ledger snapshot differs at step {i}", i)
        g = after
    if g.digest != cert.final_digest:
        return Verification(False, "ReplayMismatch: final graph differs")
    if not g.is_disk_graph():
        return Verification(False, "final graph is not B--D")
    return Verification(True)
