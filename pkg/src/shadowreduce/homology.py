"""Integral homology of the polyhedron encoded by a Martelli graph.

The cellular model ("expanded complex"):

* every edge ``e`` gives a 0-cell ``v_e`` and a 1-cell ``a_e``, the
  decomposition circle, attached as a loop at ``v_e``;
* a disk adds one 2-cell bounded by its circle;
* a pants adds two connector 1-cells (from its first boundary basepoint to
  the other two) and one 2-cell bounded by its three circles;
* the Moebius strip and the Y-bundles add a core 0-cell and 1-cell (the core
  circle, or the singular circle), one connector per slot, and one 2-cell
  per sheet.  A sheet bounded by a circle that winds ``w`` times around the
  core contributes ``coef * a_e - w * core``.

Connectors appear in a 2-cell boundary once in each direction, so they never
occur in ``d2``.  The "reduced complex" used as an independent oracle keeps
only circles, cores and 2-cells; every cycle of the graph then contributes a
free class that no 2-cell kills, which is added back as the graph's cycle
rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from . import checks
from .errors import InvariantViolation, NotAcyclicAmbient
from .graph import CutResult, MartelliGraph, VertexKind, cut_edge
from .snf import elementary_divisors, smith_normal_form

K = VertexKind

#: winding number of each sheet's boundary circle around the core, by slot
_WINDING = {
    K.M: {1: 2},
    K.Y3: {1: 3},
    K.Y12: {1: 1, 2: 2},
    K.Y111: {1: 1, 2: 1, 3: 1},
}


class Cell(NamedTuple):
    role: str  # basepoint | circle | core-point | core | connector | face | relation
    owner: tuple

    def __str__(self) -> str:
        return f"{self.role}{self.owner}"


@dataclass(frozen=True)
class ChainComplex:
    c0: tuple[Cell, ...]
    c1: tuple[Cell, ...]
    c2: tuple[Cell, ...]
    d1_columns: tuple[dict, ...]  # sparse: row index -> coefficient
    d2_columns: tuple[dict, ...]

    @staticmethod
    def _dense(columns, nrows) -> list[list[int]]:
        m = [[0] * len(columns) for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, x in col.items():
                m[i][j] = x
        return m

    @property
    def d1(self) -> list[list[int]]:
        return self._dense(self.d1_columns, len(self.c0))

    @property
    def d2(self) -> list[list[int]]:
        return self._dense(self.d2_columns, len(self.c1))

    def boundary_squared_is_zero(self) -> bool:
        for col in self.d2_columns:
            acc: dict[int, int] = {}
            for i, x in col.items():
                for r, y in self.d1_columns[i].items():
                    acc[r] = acc.get(r, 0) + x * y
            if any(acc.values()):
                return False
        return True


def build_chain_complex(g: MartelliGraph, kill_edges: Sequence[int] = ()) -> ChainComplex:
    """Expanded complex of ``g``.

    ``kill_edges`` appends one extra 2-cell per listed edge, bounded by that
    edge's circle; it is used to compute ``H_1`` modulo a circle's class.
    """
    c0: list[Cell] = []
    c1: list[Cell] = []
    c2: list[Cell] = []
    d1: list[dict] = []
    d2: list[dict] = []
    base: dict[int, int] = {}
    circle: dict[int, int] = {}
    for e in sorted(g.edges):
        base[e] = len(c0)
        c0.append(Cell("basepoint", ("edge", e)))
        circle[e] = len(c1)
        c1.append(Cell("circle", ("edge", e)))
        d1.append({})

    def connector(owner: tuple, src: int, dst: int) -> None:
        c1.append(Cell("connector", owner))
        d1.append({dst: 1, src: -1} if src != dst else {})

    def face(owner: tuple, bdry: dict[int, int]) -> None:
        c2.append(Cell("face", owner))
        d2.append({i: x for i, x in bdry.items() if x})

    for v in sorted(g.vertices):
        kind = g.vertices[v]
        wired = g.half_edges(v)
        if kind is K.B or not wired:
            continue
        if kind is K.D:
            slot, h = wired[0]
            face(("vertex", v, 1), {circle[h.edge]: g.coefficient(h)})
        elif kind is K.P:
            bdry: dict[int, int] = {}
            first = wired[0][1]
            for slot, h in wired:
                if h is not first:
                    connector(("vertex", v, slot), base[first.edge], base[h.edge])
                bdry[circle[h.edge]] = bdry.get(circle[h.edge], 0) + g.coefficient(h)
            face(("vertex", v, 1), bdry)
        else:
            point = len(c0)
            c0.append(Cell("core-point", ("vertex", v)))
            core = len(c1)
            c1.append(Cell("core", ("vertex", v)))
            d1.append({})
            windings = _WINDING[kind]
            for slot, h in wired:
                connector(("vertex", v, slot), base[h.edge], point)
            for slot, h in wired:
                bdry = {circle[h.edge]: g.coefficient(h), core: -windings[slot]}
                face(("vertex", v, slot), bdry)
    for e in kill_edges:
        c2.append(Cell("relation", ("edge", e)))
        d2.append({circle[e]: 1})
    return ChainComplex(tuple(c0), tuple(c1), tuple(c2), tuple(d1), tuple(d2))


@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple[int, int, int]
    torsion1: tuple[int, ...] = ()
    euler: int = 0
    torsion0: tuple[int, ...] = field(default=(), repr=False)
    torsion2: tuple[int, ...] = field(default=(), repr=False)

    @property
    def acyclic(self) -> bool:
        return self.betti == (1, 0, 0) and not self.torsion1

    @property
    def homology_circle(self) -> bool:
        return self.betti == (1, 1, 0) and not self.torsion1

    def to_json(self) -> dict:
        return {
            "betti": list(self.betti),
            "torsion1": list(self.torsion1),
            "euler": self.euler,
            "acyclic": self.acyclic,
        }


def _profile_of(cx: ChainComplex) -> HomologyProfile:
    r1, tors0 = elementary_divisors(cx.d1_columns)
    r2, tors1 = elementary_divisors(cx.d2_columns)
    if tors0:
        raise InvariantViolation(f"H0 has torsion {tors0}")
    b0 = len(cx.c0) - r1
    b1 = len(cx.c1) - r1 - r2
    b2 = len(cx.c2) - r2
    euler = len(cx.c0) - len(cx.c1) + len(cx.c2)
    if b0 - b1 + b2 != euler:
        raise InvariantViolation("rank bookkeeping disagrees with cell count")
    return HomologyProfile((b0, b1, b2), tuple(sorted(tors1)), euler)


def homology_profile(g: MartelliGraph) -> HomologyProfile:
    cx = build_chain_complex(g)
    if checks.enabled() and not cx.boundary_squared_is_zero():
        raise InvariantViolation("d1 * d2 != 0")
    prof = _profile_of(cx)
    if prof.euler != euler_characteristic(g, verify=False):
        raise InvariantViolation(f"euler {prof.euler} != #D - #P")
    return prof


def is_acyclic(g: MartelliGraph) -> bool:
    return homology_profile(g).acyclic


def euler_characteristic(g: MartelliGraph, verify: bool = True) -> int:
    """``#D - #P``; every other piece and every circle has Euler characteristic 0."""
    chi = g.count(K.D) - g.count(K.P)
    if verify:
        cx = build_chain_complex(g)
        alt = len(cx.c0) - len(cx.c1) + len(cx.c2)
        if alt != chi:
            raise InvariantViolation(f"cell count gives {alt}, piece count gives {chi}")
    return chi


def reduced_profile(g: MartelliGraph) -> HomologyProfile:
    """Oracle: homology from circle/core generators and sheet relations only.

    Built independently of :func:`build_chain_complex` and reduced with the
    dense Smith form.  Valid for well-formed graphs.
    """
    gens: dict[tuple, int] = {}
    for e in sorted(g.edges):
        gens[("a", e)] = len(gens)
    for v in sorted(g.vertices):
        if g.vertices[v] in _WINDING:
            gens[("core", v)] = len(gens)
    relations: list[dict[int, int]] = []
    for v in sorted(g.vertices):
        kind = g.vertices[v]
        if kind is K.B:
            continue
        sheets: dict[int, dict[int, int]] = {}
        for slot in range(1, kind.slots + 1):
            h = g.at(v, slot)
            if h is None:
                continue
            e = g.edges[h.edge]
            coef = 1 if h.index == 0 else -e.sign
            sheet = 0 if kind in (K.D, K.P) else slot
            rel = sheets.setdefault(sheet, {})
            idx = gens[("a", h.edge)]
            rel[idx] = rel.get(idx, 0) + coef
            if kind in _WINDING:
                rel[gens[("core", v)]] = -_WINDING[kind][slot]
        relations.extend(sheets.values())
    ngens = len(gens)
    if relations and ngens:
        dense = [[rel.get(i, 0) for rel in relations] for i in range(ngens)]
        _, d, _ = smith_normal_form(dense)
        diag = [d[i][i] for i in range(min(ngens, len(relations))) if d[i][i]]
    else:
        diag = []
    rank = len(diag)
    b0 = len([c for c in g.components() if len(c) > 0])
    b1 = ngens - rank + g.cycle_rank()
    b2 = len(relations) - rank
    return HomologyProfile((b0, b1, b2), tuple(sorted(x for x in diag if x > 1)), b0 - b1 + b2)


# ---------------------------------------------------------------------------
# splitting along a decomposition circle


@dataclass(frozen=True)
class SplitReport:
    edge: int
    separating: bool
    acyclic_side: int | None
    s1_side: int | None
    generator_ok: bool
    profiles: tuple[HomologyProfile, ...] = ()

    @property
    def satisfies_lemma(self) -> bool:
        """One side acyclic, the other a homology circle generated by the cut."""
        return (
            self.separating
            and self.acyclic_side is not None
            and self.s1_side is not None
            and self.acyclic_side != self.s1_side
            and self.generator_ok
        )


def circle_generates_h1(g: MartelliGraph, e: int) -> bool:
    """True when ``H_1(g)`` is infinite cyclic and generated by edge ``e``'s circle."""
    prof = homology_profile(g)
    if not prof.homology_circle:
        return False
    quotient = _profile_of(build_chain_complex(g, kill_edges=(e,)))
    return quotient.betti[1] == 0 and not quotient.torsion1


def split_classification(g: MartelliGraph, e: int, cut: CutResult | None = None) -> SplitReport:
    g.edge(e)
    if not is_acyclic(g):
        raise NotAcyclicAmbient(f"graph is not acyclic; cannot classify edge {e}")
    cut = cut or cut_edge(g, e)
    if not cut.separating:
        return SplitReport(e, False, None, None, False)
    profiles = tuple(homology_profile(side.graph) for side in cut.sides)
    acyclic_side = next((i for i, p in enumerate(profiles) if p.acyclic), None)
    s1_side = next((i for i, p in enumerate(profiles) if p.homology_circle), None)
    generator_ok = False
    if s1_side is not None:
        side = cut.sides[s1_side]
        generator_ok = circle_generates_h1(side.graph, side.marker_edge)
    return SplitReport(e, True, acyclic_side, s1_side, generator_ok, profiles)
