"""Regions of the encoded polyhedron and the gleam ledger.

A *sheet* is a piece of a region contributed by one vertex: disks, pants,
Moebius strips and ``Y3`` pieces have one sheet; ``Y12`` has two (sheet 1
is the fixed leg, sheet 2 the doubled band); ``Y111`` has one per leg.
Sheets are glued across edges, never across a singular circle, so regions
are the classes of the relation "joined by an edge".

Gleams are stored doubled (``gleam2 = 2 * gleam``) to stay integral.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from scipy.cluster.hierarchy import DisjointSet

from . import checks
from .errors import (
    DuplicateAssignment,
    InvariantViolation,
    NotInternalRegion,
    StaleRecord,
    UnknownRegion,
)
from .graph import End, MartelliGraph, VertexKind

K = VertexKind

_PER_SLOT_SHEETS = (K.Y12, K.Y111)


class Sheet(NamedTuple):
    owner: int
    index: int

    def __str__(self) -> str:
        return f"{self.owner}.{self.index}"

    @classmethod
    def parse(cls, text: str) -> "Sheet":
        owner, _, index = text.partition(".")
        return cls(int(owner), int(index))


def sheets_of(kind: VertexKind, v: int) -> list[Sheet]:
    if kind is K.B:
        return []
    if kind in _PER_SLOT_SHEETS:
        return [Sheet(v, i) for i in range(1, kind.slots + 1)]
    return [Sheet(v, 1)]


def sheet_at(g: MartelliGraph, end: End) -> Sheet | None:
    """The sheet owning slot ``end``, or ``None`` for a boundary vertex."""
    kind = g.vertices.get(end.vertex) if end.vertex in g.vertices else None
    if kind is None or kind is K.B:
        return None
    return Sheet(end.vertex, end.slot if kind in _PER_SLOT_SHEETS else 1)


@dataclass(frozen=True)
class Region:
    id: str
    sheets: frozenset[Sheet]
    boundary: bool

    @property
    def kind(self) -> str:
        return "boundary" if self.boundary else "internal"


@dataclass(frozen=True)
class RegionMap:
    regions: Mapping[str, Region]
    sheet_region: Mapping[Sheet, str]

    def internal(self) -> list[str]:
        return [rid for rid, r in self.regions.items() if not r.boundary]

    def boundary(self) -> list[str]:
        return [rid for rid, r in self.regions.items() if r.boundary]

    def to_json(self) -> list[dict]:
        return [
            {"id": r.id, "kind": r.kind, "sheets": [str(s) for s in sorted(r.sheets)]}
            for r in self.regions.values()
        ]


def extract_regions(g: MartelliGraph) -> RegionMap:
    all_sheets = [s for v in sorted(g.vertices) for s in sheets_of(g.vertices[v], v)]
    uf = DisjointSet(all_sheets)
    touches_boundary: set[Sheet] = set()
    for e in g.edges.values():
        s1, s2 = sheet_at(g, e.end1), sheet_at(g, e.end2)
        if s1 is not None and s2 is not None:
            uf.merge(s1, s2)
        elif s1 is not None:
            touches_boundary.add(s1)
        elif s2 is not None:
            touches_boundary.add(s2)
    regions: dict[str, Region] = {}
    sheet_region: dict[Sheet, str] = {}
    for members in sorted((sorted(sub) for sub in uf.subsets()), key=lambda m: m[0]):
        rid = str(members[0])
        regions[rid] = Region(rid, frozenset(members), any(s in touches_boundary for s in members))
        for s in members:
            sheet_region[s] = rid
    return RegionMap(regions, sheet_region)


# ---------------------------------------------------------------------------
# region bookkeeping across a move


@dataclass(frozen=True)
class RegionEffect:
    """How the regions of a graph map to the regions after a move.

    ``image[r]`` is the new region containing the surviving sheets of old
    region ``r``, or ``None`` when none survive.
    """

    image: Mapping[str, str | None]
    old_internal: frozenset[str]
    new_internal: frozenset[str]

    @property
    def merges(self) -> dict[str, list[str]]:
        pre: dict[str, list[str]] = {}
        for old, new in self.image.items():
            if new is not None:
                pre.setdefault(new, []).append(old)
        return {new: olds for new, olds in pre.items() if len(olds) > 1}

    @property
    def deaths(self) -> list[str]:
        return [old for old, new in self.image.items() if new is None]

    @property
    def promotions(self) -> list[str]:
        """Internal regions whose image is a boundary region."""
        return [
            old
            for old, new in self.image.items()
            if old in self.old_internal and new is not None and new not in self.new_internal
        ]

    @property
    def is_identity(self) -> bool:
        return (
            all(old == new for old, new in self.image.items())
            and self.old_internal == self.new_internal
        )

    def to_json(self) -> dict:
        return {
            "image": dict(self.image),
            "merges": self.merges,
            "deaths": self.deaths,
            "promotions": self.promotions,
        }


def region_effect(
    before: MartelliGraph,
    after: MartelliGraph,
    sheet_map: Mapping[Sheet, Sheet | None],
) -> RegionEffect:
    old = extract_regions(before)
    new = extract_regions(after)
    image: dict[str, str | None] = {}
    for rid, region in old.regions.items():
        targets = set()
        for s in region.sheets:
            t = sheet_map.get(s, s)
            if t is not None:
                if t not in new.sheet_region:
                    raise InvariantViolation(f"sheet {s} maps to missing sheet {t}")
                targets.add(new.sheet_region[t])
        if len(targets) > 1:
            raise InvariantViolation(f"region {rid} split into {sorted(targets)}")
        image[rid] = targets.pop() if targets else None
    return RegionEffect(image, frozenset(old.internal()), frozenset(new.internal()))


# ---------------------------------------------------------------------------
# gleam ledger


@dataclass(frozen=True)
class LedgerEntry:
    gleam2: int
    originals: frozenset[str]

    @property
    def gleam(self) -> float:
        return self.gleam2 / 2


@dataclass(frozen=True)
class GleamLedger:
    """Gleams of the current internal regions, with provenance.

    ``original_gleams`` records the gleam assigned to each internal region
    of the starting polyhedron; every live entry carries the set of
    original regions it accumulated and their summed gleam.
    """

    graph_digest: str
    entries: Mapping[str, LedgerEntry]
    dropped: frozenset[str]
    original_gleams: Mapping[str, int] = field(repr=False)

    @property
    def live_originals(self) -> frozenset[str]:
        out: set[str] = set()
        for entry in self.entries.values():
            out |= entry.originals
        return frozenset(out)

    def violations(self) -> list[str]:
        problems = []
        seen: set[str] = set()
        for rid, entry in self.entries.items():
            if seen & entry.originals:
                problems.append(f"originals of {rid} overlap another entry")
            seen |= entry.originals
            expected = sum(self.original_gleams[o] for o in entry.originals)
            if entry.gleam2 != expected:
                problems.append(f"{rid}: gleam2 {entry.gleam2} != sum of originals {expected}")
        if seen & self.dropped:
            problems.append("dropped regions still live")
        if seen | self.dropped != set(self.original_gleams):
            problems.append("conservation broken: live + dropped != original internal regions")
        return problems

    def check(self) -> None:
        problems = self.violations()
        if problems:
            raise InvariantViolation("; ".join(problems))

    def snapshot_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.blake2b(blob, digest_size=16).hexdigest()

    def to_json(self) -> dict:
        return {
            "graph": self.graph_digest,
            "entries": {
                rid: {"gleam2": e.gleam2, "originals": sorted(e.originals)}
                for rid, e in sorted(self.entries.items())
            },
            "dropped": sorted(self.dropped),
        }


def init_gleams(g: MartelliGraph, assignments: Iterable[tuple[str, int]] = ()) -> GleamLedger:
    regions = extract_regions(g)
    gleam2: dict[str, int] = {rid: 0 for rid in regions.internal()}
    assigned: set[str] = set()
    for rid, k in assignments:
        rid = str(rid)
        if rid not in regions.regions:
            raise UnknownRegion(f"no region {rid}")
        if regions.regions[rid].boundary:
            raise NotInternalRegion(f"region {rid} is a boundary region and carries no gleam")
        if rid in assigned:
            raise DuplicateAssignment(f"region {rid} assigned twice")
        assigned.add(rid)
        gleam2[rid] = int(k)
    entries = {rid: LedgerEntry(k, frozenset([rid])) for rid, k in gleam2.items()}
    return GleamLedger(g.digest, entries, frozenset(), dict(gleam2))


def transfer_gleams(ledger: GleamLedger, rec) -> GleamLedger:
    """Carry gleams across one move, summing the gleams of merged regions.

    ``rec`` is a :class:`~shadowreduce.moves.MoveRecord`.  Regions that
    vanish or become boundary regions move their originals to ``dropped``.
    """
    if rec.before_digest != ledger.graph_digest:
        raise StaleRecord(
            f"record applies to graph {rec.before_digest[:12]}, ledger tracks {ledger.graph_digest[:12]}"
        )
    if not ledger.entries:
        # no internal region is live; collapses never turn boundary regions internal
        return GleamLedger(rec.after_digest, {}, ledger.dropped, ledger.original_gleams)
    effect = rec.region_effect
    acc: dict[str, tuple[int, set[str]]] = {rid: (0, set()) for rid in effect.new_internal}
    dropped = set(ledger.dropped)
    for rid, entry in ledger.entries.items():
        target = effect.image.get(rid)
        if target is None or target not in effect.new_internal:
            dropped |= entry.originals
            continue
        g2, origs = acc[target]
        acc[target] = (g2 + entry.gleam2, origs | entry.originals)
    entries = {rid: LedgerEntry(g2, frozenset(origs)) for rid, (g2, origs) in sorted(acc.items())}
    out = GleamLedger(rec.after_digest, entries, frozenset(dropped), ledger.original_gleams)
    if checks.enabled():
        out.check()
    return out
