"""Cross-checks between the two homology routes and the move layer."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .errors import InvariantViolation, ShadowError
from .generate import random_graph
from .graph import MartelliGraph
from .homology import (
    _profile_of,
    build_chain_complex,
    euler_characteristic,
    homology_profile,
    reduced_profile,
    split_classification,
)
from .moves import applicable_moves, apply_move
from .snf import check_smith_form, smith_normal_form


@dataclass(frozen=True)
class Failure:
    index: int
    check: str
    detail: str
    graph: str

    def to_json(self) -> dict:
        return {"index": self.index, "check": self.check, "detail": self.detail, "graph": self.graph}


@dataclass
class SelftestReport:
    seed: int
    count: int
    checks_run: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "checks": dict(sorted(self.checks_run.items())),
            "failures": [f.to_json() for f in self.failures],
        }


def _signature(p) -> tuple:
    return p.betti, p.torsion1


def _corrupt(cx, rng: random.Random):
    """Toggle one nonzero entry of ``d2`` to zero."""
    cols = [j for j, col in enumerate(cx.d2_columns) if col]
    j = rng.choice(cols)
    col = dict(cx.d2_columns[j])
    del col[rng.choice(sorted(col))]
    d2 = cx.d2_columns[:j] + (col,) + cx.d2_columns[j + 1:]
    return replace(cx, d2_columns=d2)


def _check_graph(i: int, g: MartelliGraph, rng: random.Random, report: SelftestReport, inject_fault: bool) -> None:
    def fail(check: str, detail: str) -> None:
        report.failures.append(Failure(i, check, detail, g.digest))

    def ran(check: str) -> None:
        report.checks_run[check] = report.checks_run.get(check, 0) + 1

    cx = build_chain_complex(g)
    if inject_fault:
        cx = _corrupt(cx, rng)

    ran("boundary")
    if not cx.boundary_squared_is_zero():
        fail("boundary", "d1 * d2 != 0")

    ran("oracle")
    try:
        expanded = _profile_of(cx)
        reduced = reduced_profile(g)
        if _signature(expanded) != _signature(reduced):
            fail("oracle", f"expanded {_signature(expanded)} != reduced {_signature(reduced)}")
    except InvariantViolation as exc:
        fail("oracle", str(exc))
        return

    ran("snf")
    for name, m in (("d1", cx.d1), ("d2", cx.d2)):
        try:
            u, d, v = smith_normal_form(m)
            check_smith_form(m, u, d, v)
        except InvariantViolation as exc:
            fail("snf", f"{name}: {exc}")

    ran("euler")
    try:
        chi = euler_characteristic(g, verify=True)
        b = expanded.betti
        if b[0] - b[1] + b[2] != chi:
            fail("euler", f"betti alternating sum {b[0] - b[1] + b[2]} != {chi}")
    except InvariantViolation as exc:
        fail("euler", str(exc))

    if inject_fault:
        return
    moves = applicable_moves(g)
    if moves:
        ran("move")
        move = rng.choice(moves)
        try:
            after, _ = apply_move(g, move)
            if _signature(homology_profile(after)) != _signature(expanded):
                fail("move", f"{move} changed homology")
        except ShadowError as exc:
            fail("move", f"{move}: {exc.code}: {exc}")


def _check_split(i: int, g: MartelliGraph, report: SelftestReport) -> None:
    report.checks_run["split"] = report.checks_run.get("split", 0) + 1
    for e in sorted(g.edges):
        rep = split_classification(g, e)
        if not rep.satisfies_lemma:
            report.failures.append(Failure(i, "split", f"edge {e}: {rep}", g.digest))
            return


def oracle_selftest(seed: int, count: int, inject_fault: bool = False, max_size: int = 14) -> SelftestReport:
    """Run the cross-checks on ``count`` random graphs and as many acyclic ones.

    With ``inject_fault`` one entry of each expanded boundary matrix is
    corrupted first, and the report is expected to list failures.
    """
    report = SelftestReport(seed, count)
    rng = random.Random(f"selftest:{seed}")
    for i in range(count):
        n = rng.randint(2, max_size)
        g = random_graph(rng.randrange(2**32), n)
        _check_graph(i, g, rng, report, inject_fault)
        if not inject_fault:
            a = random_graph(rng.randrange(2**32), rng.randint(2, max_size), require_acyclic=True)
            _check_split(i, a, report)
    return report
