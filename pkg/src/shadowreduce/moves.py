"""Graph rewrites: IH and YV (homeomorphisms) and the collapse moves A, B, C.

Before/after patterns::

    IH(e, variant)   P1{w,x,e} P2{e,y,z}  ->  P1{w,y,e'} P2{x,z,e'}   (variant 1)
                                          ->  P1{w,z,e'} P2{x,y,e'}   (variant 2)
    YV(p, d)         P{d,x,y} + D         ->  x and y spliced into one edge
    A(b, v)          B -- Y111{b,e1,e2}   ->  e1 and e2 spliced into one edge
    B(b, t)          B =2= Y12{b,f}       ->  f ends in a fresh B
    C(b, p, t)       B -- P{b,g,e}, g =2= Y12{g,f}
                                          ->  P'{e,f,b'} with a fresh B' on b'

``=2=`` marks the doubled slot of a ``Y12``.  A splice replaces two edges
that are joined through an annulus by one edge; its sign is chosen so the
identification of the two circles is preserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Mapping

from . import checks
from .errors import InvariantViolation, PatternMismatch, SpliceDegenerate, WrongSlot
from .graph import DOUBLED_SLOT, SINGLE_SLOT, Edge, End, GraphEditor, HalfEdge, MartelliGraph, VertexKind, validate
from .homology import homology_profile
from .regions import RegionEffect, Sheet, region_effect, sheet_at

K = VertexKind


class MoveKind(str, Enum):
    IH = "IH"
    YV = "YV"
    A = "A"
    B = "B"
    C = "C"


PARAMS = {
    MoveKind.IH: ("e", "variant"),
    MoveKind.YV: ("p", "d"),
    MoveKind.A: ("b", "v"),
    MoveKind.B: ("b", "t"),
    MoveKind.C: ("b", "p", "t"),
}

#: vertex-count change of each move
VERTEX_DELTA = {MoveKind.IH: 0, MoveKind.YV: -2, MoveKind.A: -2, MoveKind.B: -1, MoveKind.C: -1}

#: dispatch priority used by the reducer (lower first)
PRIORITY = {MoveKind.A: 0, MoveKind.B: 1, MoveKind.C: 2, MoveKind.YV: 3, MoveKind.IH: 4}


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    args: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", MoveKind(self.kind))
        if len(self.args) != len(PARAMS[self.kind]):
            raise ValueError(f"{self.kind.value} takes {PARAMS[self.kind]}")

    @property
    def params(self) -> dict[str, int]:
        return dict(zip(PARAMS[self.kind], self.args))

    def __str__(self) -> str:
        return " ".join([self.kind.value] + [f"{k}={v}" for k, v in self.params.items()])

    @classmethod
    def parse(cls, spec: str) -> "Move":
        """Parse ``"A b=5 v=2"`` or ``"IH e=7 variant=1"``."""
        parts = spec.split()
        if not parts:
            raise ValueError("empty move spec")
        try:
            kind = MoveKind(parts[0].upper())
        except ValueError:
            raise ValueError(f"unknown move {parts[0]!r}") from None
        given = {}
        for token in parts[1:]:
            m = re.fullmatch(r"(\w+)=(\d+)", token)
            if not m:
                raise ValueError(f"bad move parameter {token!r}")
            given[m.group(1)] = int(m.group(2))
        names = PARAMS[kind]
        if set(given) != set(names):
            raise ValueError(f"{kind.value} needs parameters {', '.join(names)}")
        return cls(kind, tuple(given[n] for n in names))

    def to_json(self) -> dict:
        return {"kind": self.kind.value, **self.params}

    @classmethod
    def from_json(cls, data: Mapping) -> "Move":
        kind = MoveKind(data["kind"])
        return cls(kind, tuple(int(data[n]) for n in PARAMS[kind]))


@dataclass(frozen=True, eq=False)
class MoveRecord:
    """One applied rewrite.

    ``sheet_map`` lists only sheets that do not survive unchanged: each
    maps to the new sheet absorbing it, or ``None`` when it vanishes.  Any
    other sheet maps to itself (see :meth:`image`).  The before/after graphs
    are kept while the record is attached so the region effect can be
    derived; :meth:`detach` drops them for long certificates.
    """

    move: Move
    before_digest: str
    after_digest: str
    vertex_delta: int
    sheet_map: Mapping[Sheet, Sheet | None]
    before: MartelliGraph | None = field(default=None, repr=False)
    after: MartelliGraph | None = field(default=None, repr=False)
    effect: RegionEffect | None = field(default=None, repr=False)

    def image(self, sheet: Sheet) -> Sheet | None:
        return self.sheet_map.get(sheet, sheet)

    @property
    def kind(self) -> MoveKind:
        return self.move.kind

    @cached_property
    def region_effect(self) -> RegionEffect:
        if self.effect is not None:
            return self.effect
        if self.before is None or self.after is None:
            raise ValueError("detached record has no region effect")
        return region_effect(self.before, self.after, self.sheet_map)

    def detach(self) -> "MoveRecord":
        effect = self.__dict__.get("region_effect", self.effect)
        return replace(self, before=None, after=None, effect=effect)

    def to_json(self) -> dict:
        out = {
            "move": self.move.to_json(),
            "spec": str(self.move),
            "before": self.before_digest,
            "after": self.after_digest,
            "vertex_delta": self.vertex_delta,
            "sheet_map": {str(k): (str(v) if v is not None else None) for k, v in sorted(self.sheet_map.items())},
        }
        effect = self.__dict__.get("region_effect", self.effect)
        if effect is None and self.before is not None:
            effect = self.region_effect
        out["region_effect"] = effect.to_json() if effect is not None else None
        return out


# ---------------------------------------------------------------------------
# helpers


def _require_kind(g: MartelliGraph, v: int, kind: VertexKind, role: str) -> None:
    if v not in g.vertices:
        raise PatternMismatch(f"{role}: no vertex {v}")
    if g.vertices[v] is not kind:
        raise PatternMismatch(f"{role}: vertex {v} is {g.vertices[v].value}, expected {kind.value}")


def _sole_half_edge(g: MartelliGraph, v: int) -> HalfEdge:
    h = g.at(v, 1)
    if h is None:
        raise PatternMismatch(f"vertex {v} is not wired")
    return h


def _others(g: MartelliGraph, v: int, exclude: HalfEdge) -> list[tuple[int, HalfEdge]]:
    return [(slot, h) for slot, h in g.half_edges(v) if h != exclude]


def _far_sheet(g: MartelliGraph, h: HalfEdge) -> Sheet | None:
    return sheet_at(g, g.far_end(h))


def _splice(ed: GraphEditor, g: MartelliGraph, hx: HalfEdge, hy: HalfEdge, cx: int, cy: int) -> int:
    """Replace edges ``hx.edge`` and ``hy.edge`` by one edge joining their far ends.

    The removed piece identified the two circles by ``cx * x + cy * y = 0``.
    Returns the id of the new edge (the smaller of the two).
    """
    if hx.edge == hy.edge:
        raise SpliceDegenerate(f"edge {hx.edge} would be spliced to itself")
    if hy.edge < hx.edge:
        hx, hy, cx, cy = hy, hx, cy, cx
    u, w = g.far_end(hx), g.far_end(hy)
    ex = g.edges[hx.edge].coefficient(1 - hx.index)
    ey = g.edges[hy.edge].coefficient(1 - hy.index)
    sign = ex * ey * cx * cy
    ed.remove_edge(hx.edge)
    ed.remove_edge(hy.edge)
    ed.add_edge(hx.edge, Edge(u, w, sign))
    return hx.edge


def _finish(g: MartelliGraph, ed: GraphEditor, move: Move, sheet_map: dict) -> tuple[MartelliGraph, MoveRecord]:
    after = ed.freeze()
    rec = MoveRecord(
        move,
        g.digest,
        after.digest,
        len(after) - len(g),
        sheet_map,
        before=g,
        after=after,
    )
    if checks.enabled():
        verify_record(rec)
    return after, rec


def verify_record(rec: MoveRecord) -> None:
    """Checked-mode postconditions of a move."""
    g, after = rec.before, rec.after
    report = validate(after)
    if not report.well_formed:
        raise InvariantViolation(f"{rec.move}: after-graph malformed: {report.violations}")
    if rec.vertex_delta != VERTEX_DELTA[rec.kind]:
        raise InvariantViolation(f"{rec.move}: vertex delta {rec.vertex_delta}")
    before_p, after_p = homology_profile(g), homology_profile(after)
    if before_p != after_p:
        raise InvariantViolation(f"{rec.move}: homology changed {before_p} -> {after_p}")
    rec.region_effect  # raises if a region splits or a sheet maps nowhere valid


# ---------------------------------------------------------------------------
# the five moves


def apply_ih(g: MartelliGraph, e: int, variant: int = 1) -> tuple[MartelliGraph, MoveRecord]:
    if variant not in (1, 2):
        raise PatternMismatch(f"IH variant must be 1 or 2, got {variant}")
    if e not in g.edges:
        raise PatternMismatch(f"no edge {e}")
    edge = g.edges[e]
    p1, p2 = edge.end1.vertex, edge.end2.vertex
    if p1 == p2:
        raise PatternMismatch(f"edge {e} is a self-edge")
    _require_kind(g, p1, K.P, "IH")
    _require_kind(g, p2, K.P, "IH")
    hw, hx = [h for _, h in _others(g, p1, HalfEdge(e, 0))]
    hy, hz = [h for _, h in _others(g, p2, HalfEdge(e, 1))]
    if variant == 2:
        hy, hz = hz, hy
    # New ends for every half-edge that moves; the second pants is re-oriented
    # to agree with the first when edge e reverses orientation.
    new_end = {hw: End(p1, 1), hy: End(p1, 2), hx: End(p2, 1), hz: End(p2, 2)}
    flip = edge.sign == -1
    flips: dict[int, int] = {}
    if flip:
        for h in (hy, hz):
            flips[h.edge] = flips.get(h.edge, 1) * -1
    ed = g.edit()
    touched = sorted({h.edge for h in new_end})
    for eid in touched:
        old = g.edges[eid]
        ends = [new_end.get(HalfEdge(eid, i), old.end(i)) for i in (0, 1)]
        ed.replace_edge(eid, Edge(ends[0], ends[1], old.sign * flips.get(eid, 1)))
    ed.replace_edge(e, Edge(End(p1, 3), End(p2, 3), 1))
    return _finish(g, ed, Move(MoveKind.IH, (e, variant)), {})


def apply_yv(g: MartelliGraph, p: int, d: int) -> tuple[MartelliGraph, MoveRecord]:
    _require_kind(g, p, K.P, "YV")
    _require_kind(g, d, K.D, "YV")
    hd = _sole_half_edge(g, d)
    if g.far_end(hd).vertex != p:
        raise PatternMismatch(f"disk {d} is not attached to pants {p}")
    hp = HalfEdge(hd.edge, 1 - hd.index)
    (_, hx), (_, hy) = _others(g, p, hp)
    if hx.edge == hy.edge:
        raise SpliceDegenerate(f"pants {p} has its two other circles glued to each other")
    ed = g.edit()
    ed.remove_edge(hd.edge)
    _splice(ed, g, hx, hy, g.coefficient(hx), g.coefficient(hy))
    ed.remove_vertex(p)
    ed.remove_vertex(d)
    return _finish(g, ed, Move(MoveKind.YV, (p, d)), {Sheet(p, 1): None, Sheet(d, 1): None})


def apply_a(g: MartelliGraph, b: int, v: int) -> tuple[MartelliGraph, MoveRecord]:
    _require_kind(g, b, K.B, "A")
    if v not in g.vertices:
        raise PatternMismatch(f"A: no vertex {v}")
    hb = _sole_half_edge(g, b)
    far = g.far_end(hb)
    if far.vertex != v:
        raise PatternMismatch(f"boundary {b} is not attached to {v}")
    _require_kind(g, v, K.Y111, "A")
    hv = HalfEdge(hb.edge, 1 - hb.index)
    (sj, hj), (sk, hk) = _others(g, v, hv)
    if hj.edge == hk.edge:
        raise SpliceDegenerate(f"the two remaining legs of {v} are glued to each other")
    sheet_map = {
        Sheet(v, far.slot): None,
        Sheet(v, sj): _far_sheet(g, hj),
        Sheet(v, sk): _far_sheet(g, hk),
    }
    ed = g.edit()
    ed.remove_edge(hb.edge)
    # legs j, k give cj*a_j - s = 0 and ck*a_k - s = 0
    _splice(ed, g, hj, hk, g.coefficient(hj), -g.coefficient(hk))
    ed.remove_vertex(b)
    ed.remove_vertex(v)
    return _finish(g, ed, Move(MoveKind.A, (b, v)), sheet_map)


def apply_b(g: MartelliGraph, b: int, t: int) -> tuple[MartelliGraph, MoveRecord]:
    _require_kind(g, b, K.B, "B")
    if t not in g.vertices:
        raise PatternMismatch(f"B: no vertex {t}")
    hb = _sole_half_edge(g, b)
    far = g.far_end(hb)
    if far.vertex != t:
        raise PatternMismatch(f"boundary {b} is not attached to {t}")
    _require_kind(g, t, K.Y12, "B")
    if far.slot != DOUBLED_SLOT:
        raise WrongSlot(f"boundary {b} is glued to the single slot of {t}")
    hf = g.at(t, SINGLE_SLOT)
    ed = g.edit()
    fresh = ed.fresh_vertex_id()
    ed.remove_edge(hb.edge)
    old = g.edges[hf.edge]
    ends = [old.end1, old.end2]
    ends[hf.index] = End(fresh, 1)
    ed.replace_edge(hf.edge, Edge(ends[0], ends[1], old.sign))
    ed.remove_vertex(b)
    ed.remove_vertex(t)
    ed.add_vertex(fresh, K.B)
    sheet_map = {Sheet(t, DOUBLED_SLOT): None, Sheet(t, SINGLE_SLOT): _far_sheet(g, hf)}
    return _finish(g, ed, Move(MoveKind.B, (b, t)), sheet_map)


def apply_c(g: MartelliGraph, b: int, p: int, t: int) -> tuple[MartelliGraph, MoveRecord]:
    _require_kind(g, b, K.B, "C")
    _require_kind(g, p, K.P, "C")
    _require_kind(g, t, K.Y12, "C")
    hb = _sole_half_edge(g, b)
    if g.far_end(hb).vertex != p:
        raise PatternMismatch(f"boundary {b} is not attached to pants {p}")
    hp_b = HalfEdge(hb.edge, 1 - hb.index)
    rest = _others(g, p, hp_b)
    to_t = [h for _, h in rest if g.far_end(h).vertex == t]
    if not to_t:
        raise PatternMismatch(f"pants {p} is not adjacent to {t}")
    doubled = [h for h in to_t if g.far_end(h).slot == DOUBLED_SLOT]
    if not doubled:
        raise WrongSlot(f"pants {p} is glued to the single slot of {t}")
    hg = doubled[0]
    (he,) = [h for _, h in rest if h != hg]
    hf = g.at(t, SINGLE_SLOT)
    ed = g.edit()
    new_p = ed.fresh_vertex_id()
    new_b = ed.fresh_vertex_id()
    ed.remove_edge(hb.edge)
    ed.remove_edge(hg.edge)
    rewire = {he: End(new_p, 1), hf: End(new_p, 2)}
    for eid in sorted({h.edge for h in rewire}):
        old = g.edges[eid]
        ends = [rewire.get(HalfEdge(eid, i), old.end(i)) for i in (0, 1)]
        ed.replace_edge(eid, Edge(ends[0], ends[1], old.sign))
    for v in (b, p, t):
        ed.remove_vertex(v)
    ed.add_vertex(new_p, K.P)
    ed.add_vertex(new_b, K.B)
    ed.add_edge(ed.fresh_edge_id(), Edge(End(new_p, 3), End(new_b, 1), 1))
    target = Sheet(new_p, 1)
    sheet_map = {Sheet(p, 1): target, Sheet(t, SINGLE_SLOT): target, Sheet(t, DOUBLED_SLOT): target}
    return _finish(g, ed, Move(MoveKind.C, (b, p, t)), sheet_map)


_APPLY = {
    MoveKind.IH: apply_ih,
    MoveKind.YV: apply_yv,
    MoveKind.A: apply_a,
    MoveKind.B: apply_b,
    MoveKind.C: apply_c,
}


def apply_move(g: MartelliGraph, move: Move) -> tuple[MartelliGraph, MoveRecord]:
    return _APPLY[move.kind](g, *move.args)


# ---------------------------------------------------------------------------
# pattern search


def _involved(move: Move, g: MartelliGraph) -> int:
    if move.kind is MoveKind.IH:
        e = g.edges[move.args[0]]
        return min(e.end1.vertex, e.end2.vertex)
    return min(move.args)


def applicable_moves(g: MartelliGraph) -> list[Move]:
    """Every match of a move pattern, ordered by smallest involved vertex id."""
    found: list[Move] = []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        u, w = e.end1.vertex, e.end2.vertex
        if u != w and g.vertices.get(u) is K.P and g.vertices.get(w) is K.P:
            found += [Move(MoveKind.IH, (eid, 1)), Move(MoveKind.IH, (eid, 2))]
    for d in sorted(g.vertices_of_kind(K.D)):
        h = g.at(d, 1)
        if h is None:
            continue
        p = g.far_end(h).vertex
        if g.vertices.get(p) is K.P:
            others = [x for _, x in _others(g, p, HalfEdge(h.edge, 1 - h.index))]
            if len(others) == 2 and others[0].edge != others[1].edge:
                found.append(Move(MoveKind.YV, (p, d)))
    for b in sorted(g.vertices_of_kind(K.B)):
        h = g.at(b, 1)
        if h is None:
            continue
        far = g.far_end(h)
        kind = g.vertices.get(far.vertex)
        if kind is K.Y111:
            others = [x for _, x in _others(g, far.vertex, HalfEdge(h.edge, 1 - h.index))]
            if len(others) == 2 and others[0].edge != others[1].edge:
                found.append(Move(MoveKind.A, (b, far.vertex)))
        elif kind is K.Y12 and far.slot == DOUBLED_SLOT:
            found.append(Move(MoveKind.B, (b, far.vertex)))
        elif kind is K.P:
            seen = set()
            for _, x in _others(g, far.vertex, HalfEdge(h.edge, 1 - h.index)):
                nb = g.far_end(x)
                if g.vertices.get(nb.vertex) is K.Y12 and nb.slot == DOUBLED_SLOT and nb.vertex not in seen:
                    seen.add(nb.vertex)
                    found.append(Move(MoveKind.C, (b, far.vertex, nb.vertex)))
    found.sort(key=lambda m: (_involved(m, g), PRIORITY[m.kind], m.args))
    return found
