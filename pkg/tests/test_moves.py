import pytest
from hypothesis import given, strategies as st

from conftest import G
from contexts import move_contexts
from graphs import B_Y12_D, C_PATTERN, DISK, PANTS_3B
from shadowreduce import checks
from shadowreduce.errors import PatternMismatch, SpliceDegenerate, WrongSlot
from shadowreduce.generate import random_graph
from shadowreduce.graph import VertexKind, serialize, validate
from shadowreduce.homology import homology_profile
from shadowreduce.moves import (
    PRIORITY,
    VERTEX_DELTA,
    Move,
    MoveKind,
    applicable_moves,
    apply_a,
    apply_b,
    apply_c,
    apply_ih,
    apply_move,
    apply_yv,
)
from shadowreduce.regions import extract_regions, sheets_of
from brute import canonical_form

K = VertexKind
MK = MoveKind

TWO_PANTS = (
    "vertex 1 P / vertex 2 P / vertex 3 B / vertex 4 B / vertex 5 B / vertex 6 B / "
    "edge 1 1.1 3.1 / edge 2 1.2 4.1 / edge 3 1.3 2.1 / edge 4 2.2 5.1 / edge 5 2.3 6.1"
)
Y111_BDD = "vertex 1 B / vertex 2 Y111 / vertex 3 D / vertex 4 D / edge 1 1.1 2.1 / edge 2 2.2 3.1 / edge 3 2.3 4.1"


def kinds(g):
    return sorted(k.value for k in g.vertices.values())


def test_move_spec_round_trip():
    for spec in ("A b=5 v=2", "IH e=7 variant=1", "C b=1 p=2 t=3", "YV p=3 d=5", "B b=1 t=2"):
        m = Move.parse(spec)
        assert str(m) == spec
        assert Move.from_json(m.to_json()) == m


@pytest.mark.parametrize("spec", ["", "Q x=1", "A b=1", "A b=1 v=x", "YV p=1 d=2 z=3"])
def test_bad_move_specs(spec):
    with pytest.raises(ValueError):
        Move.parse(spec)


def test_tables():
    assert [VERTEX_DELTA[k] for k in (MK.IH, MK.YV, MK.A, MK.B, MK.C)] == [0, -2, -2, -1, -1]
    assert sorted(MK, key=PRIORITY.get) == [MK.A, MK.B, MK.C, MK.YV, MK.IH]


def test_applicable_examples():
    assert applicable_moves(G(DISK)) == []
    assert applicable_moves(G(B_Y12_D)) == [Move(MK.B, (1, 2))]
    ih = applicable_moves(G(TWO_PANTS))
    assert ih == [Move(MK.IH, (3, 1)), Move(MK.IH, (3, 2))]


def test_ih_reassociates():
    g = G(TWO_PANTS)
    after, rec = apply_ih(g, 3, 1)
    # P1 keeps w (to B3) and takes y (to B5); P2 keeps x and z
    nbrs = {p: sorted(after.neighbors(p)) for p in (1, 2)}
    assert nbrs == {1: [2, 3, 5], 2: [1, 4, 6]}
    assert homology_profile(after) == homology_profile(g)
    assert rec.vertex_delta == 0
    after2, _ = apply_ih(g, 3, 2)
    assert {p: sorted(after2.neighbors(p)) for p in (1, 2)} == {1: [2, 3, 6], 2: [1, 4, 5]}


def test_ih_is_an_involution_up_to_relabelling():
    g = G(TWO_PANTS)
    once, _ = apply_ih(g, 3, 1)
    inner = next(e for e, x in once.edges.items() if once.kind(x.end1.vertex) is once.kind(x.end2.vertex) is K.P)
    twice, _ = apply_ih(once, inner, 1)
    assert canonical_form(twice) == canonical_form(g)


def test_ih_rejects_self_edge():
    g = G("vertex 1 P / vertex 2 B / edge 1 1.1 1.2 / edge 2 1.3 2.1")
    with pytest.raises(PatternMismatch):
        apply_ih(g, 1, 1)


def test_yv_to_disk():
    g = G("vertex 1 P / vertex 2 D / vertex 3 D / vertex 4 B / edge 1 1.1 2.1 / edge 2 1.2 3.1 / edge 3 1.3 4.1")
    after, rec = apply_yv(g, 1, 2)
    assert after.is_disk_graph()
    assert rec.vertex_delta == -2
    assert homology_profile(after) == homology_profile(g)


def test_yv_to_annulus():
    g = G("vertex 1 P / vertex 2 D / vertex 3 B / vertex 4 B / edge 1 1.1 2.1 / edge 2 1.2 3.1 / edge 3 1.3 4.1")
    after, _ = apply_yv(g, 1, 2)
    assert kinds(after) == ["B", "B"]
    assert homology_profile(after).betti == homology_profile(g).betti == (1, 1, 0)


def test_yv_errors():
    with pytest.raises(PatternMismatch):
        apply_yv(G(PANTS_3B), 1, 2)
    with pytest.raises(SpliceDegenerate):
        apply_yv(G("vertex 1 P / vertex 2 D / edge 1 1.1 2.1 / edge 2 1.2 1.3"), 1, 2)


def test_move_a_example():
    g = G(Y111_BDD)
    after, rec = apply_a(g, 1, 2)
    assert kinds(after) == ["D", "D"]
    assert homology_profile(g).betti == homology_profile(after).betti == (1, 0, 1)
    # the free leg vanishes; the two remaining legs' regions merge
    assert rec.image(sheets_of(K.Y111, 2)[0]) is None
    assert len(extract_regions(after).regions) == 1


def test_move_a_rejects_pants():
    with pytest.raises(PatternMismatch):
        apply_a(G(PANTS_3B), 2, 1)


def test_move_b_example():
    g = G(B_Y12_D)
    after, rec = apply_b(g, 1, 2)
    assert after.is_disk_graph()
    assert rec.vertex_delta == -1
    assert homology_profile(after).acyclic and homology_profile(g).acyclic


def test_move_b_wrong_slot():
    g = G("vertex 1 B / vertex 2 Y12 / vertex 3 D / edge 1 1.1 2.1 / edge 2 2.2 3.1")
    with pytest.raises(WrongSlot):
        apply_b(g, 1, 2)


def test_move_c_example():
    g = G(C_PATTERN)
    after, rec = apply_c(g, 1, 2, 3)
    assert kinds(after) == ["B", "D", "D", "P"]
    assert homology_profile(g).betti == homology_profile(after).betti == (1, 0, 0)
    assert rec.vertex_delta == -1
    assert validate(after).well_formed


def test_move_c_wrong_slot():
    g = G(
        "vertex 1 B / vertex 2 P / vertex 3 Y12 / vertex 4 D / vertex 5 D / "
        "edge 1 1.1 2.1 / edge 2 2.2 3.1 / edge 3 2.3 4.1 / edge 4 3.2 5.1"
    )
    with pytest.raises(WrongSlot):
        apply_c(g, 1, 2, 3)


def test_apply_move_dispatch(example8):
    after, rec = apply_move(example8, Move.parse("YV p=3 d=5"))
    assert len(after) == 6
    assert rec.before_digest == example8.digest and rec.after_digest == after.digest


def test_records_are_total_and_detachable(example8):
    after, rec = apply_move(example8, Move.parse("YV p=3 d=5"))
    old_sheets = [s for v, k in example8.vertices.items() for s in sheets_of(k, v)]
    new_sheets = {s for v, k in after.vertices.items() for s in sheets_of(k, v)}
    for s in old_sheets:
        img = rec.image(s)
        assert img is None or img in new_sheets
    data = rec.to_json()
    small = rec.detach()
    assert small.before is None and small.to_json() == data


@pytest.mark.parametrize("kind", list(MoveKind))
def test_random_contexts_preserve_homology(kind):
    for g, move in move_contexts(kind, 25, seed=1):
        with checks.checked_mode():
            after, rec = apply_move(g, move)
        assert homology_profile(after) == homology_profile(g)
        assert rec.vertex_delta == VERTEX_DELTA[kind]
        assert validate(after).well_formed


@given(st.integers(0, 100_000), st.integers(3, 20))
def test_every_applicable_move_is_sound(seed, n):
    g = random_graph(seed, n)
    before = homology_profile(g)
    for move in applicable_moves(g):
        try:
            after, _ = apply_move(g, move)
        except SpliceDegenerate:
            continue
        assert homology_profile(after) == before, f"{move} on\n{serialize(g)}"


@given(st.integers(0, 100_000), st.integers(3, 20))
def test_applicable_moves_are_ordered(seed, n):
    g = random_graph(seed, n)
    moves = applicable_moves(g)
    assert moves == sorted(moves, key=lambda m: (min(_involved(m, g)), PRIORITY[m.kind], m.args))


def _involved(m, g):
    if m.kind is MK.IH:
        e = g.edge(m.args[0])
        return (e.end1.vertex, e.end2.vertex)
    return m.args
