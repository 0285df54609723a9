"""Command-line front end: ``shadow-reduce <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from collections import Counter
from typing import Sequence

from .enumeration import enumerate_graphs
from .errors import (
    BadSlot,
    DuplicateAssignment,
    DuplicateId,
    GraphSyntaxError,
    MalformedGraph,
    NotAcyclic,
    NotConnected,
    NotInternalRegion,
    ShadowError,
    UnknownKind,
    UnknownRegion,
    UnknownVertex,
)
from .generate import random_graph
from .graph import cut_edge, export_dot, parse_document, serialize, validate
from .homology import euler_characteristic, homology_profile
from .moves import Move, apply_move
from .reducer import reduce_to_disk
from .regions import extract_regions, init_gleams
from .selftest import oracle_selftest

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NOT_ACYCLIC = 2
EXIT_INVALID = 3
EXIT_USAGE = 64

# errors meaning the input file itself is invalid
_INVALID_INPUT = (
    GraphSyntaxError,
    MalformedGraph,
    DuplicateId,
    UnknownKind,
    BadSlot,
    UnknownVertex,
    UnknownRegion,
    NotInternalRegion,
    DuplicateAssignment,
)

SEED_ENV = "SHADOW_REDUCE_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _emit(out, args, data, text: str) -> None:
    if args.json:
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") or not text else text + "\n")


def _table(rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(c) for c in row] for row in rows]
    if not cells:
        return ""
    widths = [max(len(r[i]) for r in cells if i < len(r)) for i in range(max(map(len, cells)))]
    lines = ["  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text)


def _load_valid(path: str):
    doc = _load(path)
    report = validate(doc.graph)
    if not report.well_formed:
        first = report.violations[0]
        raise MalformedGraph(f"{first.code} at {first.location}")
    return doc


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, out) -> int:
    doc = _load(args.file)
    report = validate(doc.graph)
    data = {"well_formed": report.well_formed, "violations": [{"code": v.code, "location": v.location} for v in report.violations]}
    if report.well_formed:
        text = "well-formed"
    else:
        text = _table([(v.code, v.location) for v in report.violations])
    _emit(out, args, data, text)
    return EXIT_OK if report.well_formed else EXIT_INVALID


def cmd_homology(args, out) -> int:
    g = _load_valid(args.file).graph
    out.write(json.dumps(homology_profile(g).to_json()) + "\n")
    return EXIT_OK


def cmd_euler(args, out) -> int:
    g = _load_valid(args.file).graph
    chi = euler_characteristic(g)
    _emit(out, args, {"euler": chi}, str(chi))
    return EXIT_OK


def cmd_regions(args, out) -> int:
    g = _load_valid(args.file).graph
    regions = extract_regions(g)
    rows = [(r["id"], r["kind"], " ".join(r["sheets"])) for r in regions.to_json()]
    _emit(out, args, regions.to_json(), _table([("id", "kind", "sheets"), *rows]))
    return EXIT_OK


def cmd_cut(args, out) -> int:
    g = _load_valid(args.file).graph
    result = cut_edge(g, args.edge)
    sides = [
        {"graph": serialize(s.graph), "marker_vertex": s.marker_vertex, "marker_edge": s.marker_edge}
        for s in result.sides
    ]
    text = [f"# separating: {'yes' if result.separating else 'no'}"]
    for i, s in enumerate(sides, 1):
        text.append(f"# side {i}: marker vertex {s['marker_vertex']}, marker edge {s['marker_edge']}")
        text.append(s["graph"].rstrip("\n"))
    _emit(out, args, {"separating": result.separating, "sides": sides}, "\n".join(text))
    return EXIT_OK


def cmd_apply(args, out) -> int:
    g = _load_valid(args.file).graph
    try:
        move = Move.parse(args.move)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    after, rec = apply_move(g, move)
    record = rec.to_json()
    if args.json:
        out.write(json.dumps({"graph": serialize(after), "record": record}, sort_keys=True) + "\n")
    else:
        out.write(serialize(after))
        out.write(json.dumps(record, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    doc = _load_valid(args.file)
    g = doc.graph
    gleams = dict(doc.gleams)
    if args.seed_gleams:
        rng = random.Random(f"gleams:{args.seed}")
        for rid in extract_regions(g).internal():
            gleams.setdefault(rid, rng.randint(-6, 6))
    ledger = init_gleams(g, sorted(gleams.items()))
    cert = reduce_to_disk(g, ledger, check_invariants=args.check_invariants, keep_snapshots=bool(args.trace))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(cert.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    data = {"steps": cert.trace, "final": cert.final_digest}
    rows = [(i, step) for i, step in enumerate(cert.trace, 1)]
    text = _table(rows) + f"reduced to B-D in {len(rows)} step(s)"
    _emit(out, args, data, text)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    g = random_graph(args.seed, args.n, require_acyclic=args.acyclic, require_tree=args.tree, signs=not args.no_signs)
    _emit(out, args, {"graph": serialize(g)}, serialize(g))
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    if args.n < 0:
        raise UsageError("n must be non-negative")
    counts: Counter = Counter()
    for item in enumerate_graphs(args.n):
        if args.acyclic_only and not item.acyclic:
            continue
        counts[len(item.graph)] += 1
        if args.count:
            continue
        if args.json:
            out.write(json.dumps({"graph": serialize(item.graph), **item.profile.to_json()}, sort_keys=True) + "\n")
        else:
            p = item.profile
            out.write(f"# betti={list(p.betti)} torsion1={list(p.torsion1)} acyclic={str(p.acyclic).lower()}\n")
            out.write(serialize(item.graph) + "\n")
    if args.count:
        data = {str(k): v for k, v in sorted(counts.items())}
        _emit(out, args, data, _table([("vertices", "graphs"), *sorted(counts.items())]))
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    report = oracle_selftest(args.seed, args.count, inject_fault=args.inject_fault)
    rows = [(name, n) for name, n in sorted(report.checks_run.items())]
    text = _table([("check", "runs"), *rows]) if rows else ""
    text += "".join(f"FAIL {f.index} {f.check}: {f.detail}\n" for f in report.failures)
    text += f"{len(report.failures)} failure(s) over {report.count} graph(s)"
    _emit(out, args, report.to_json(), text)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_export_dot(args, out) -> int:
    g = _load_valid(args.file).graph
    out.write(export_dot(g))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")

    parser = _Parser(prog="shadow-reduce", description="Martelli graph homology and collapse certificates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def file_cmd(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
        p.set_defaults(func=func)
        return p

    file_cmd("validate", cmd_validate, "check slot saturation and references")
    file_cmd("homology", cmd_homology, "integral homology profile (JSON)")
    file_cmd("euler", cmd_euler, "Euler characteristic")
    file_cmd("regions", cmd_regions, "regions with member sheets")
    p = file_cmd("cut", cmd_cut, "cut along an edge's circle")
    p.add_argument("edge", type=int)
    p = file_cmd("apply", cmd_apply, "apply one move, e.g. 'A b=5 v=2'")
    p.add_argument("move")
    p = sub.add_parser("reduce", parents=[common, seeded], help="reduce an acyclic graph to B-D")
    p.add_argument("file")
    p.add_argument("--trace", metavar="OUT", help="write the certificate as JSON")
    p.add_argument("--check-invariants", action="store_true")
    p.add_argument("--seed-gleams", action="store_true", help="random gleams on regions the file leaves unset")
    p.set_defaults(func=cmd_reduce)
    file_cmd("export-dot", cmd_export_dot, "Graphviz rendering")

    p = sub.add_parser("gen", parents=[common, seeded], help="random well-formed graph")
    p.add_argument("--n", type=int, required=True, help="vertex count")
    p.add_argument("--acyclic", action="store_true")
    p.add_argument("--tree", action="store_true")
    p.add_argument("--no-signs", action="store_true", help="all edge signs +1")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("enumerate", parents=[common], help="all connected graphs up to n vertices")
    p.add_argument("n", type=int)
    p.add_argument("--acyclic-only", action="store_true")
    p.add_argument("--count", action="store_true", help="print counts per vertex count only")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("oracle-selftest", parents=[common, seeded], help="cross-check the homology oracles")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--inject-fault", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "seed", None) is None and "seed" in args:
            args.seed = default_seed()
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except _INVALID_INPUT as exc:
        err.write(f"{exc.code}: {exc}\n")
        return EXIT_INVALID
    except (NotAcyclic, NotConnected) as exc:
        err.write(f"{exc.code}: {exc}\n")
        return EXIT_NOT_ACYCLIC
    except ShadowError as exc:
        err.write(f"{exc.code}: {exc}\n")
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
