import pytest
from hypothesis import given, strategies as st

from conftest import G
from graphs import ANNULUS, DISK, D_Y3, PANTS_3B, PANTS_CYCLE, RP2, SPHERE
from shadowreduce import checks
from shadowreduce.errors import NotAcyclicAmbient, UnknownEdge
from shadowreduce.generate import random_graph
from shadowreduce.graph import Edge, MartelliGraph
from shadowreduce.homology import (
    build_chain_complex,
    circle_generates_h1,
    euler_characteristic,
    homology_profile,
    is_acyclic,
    reduced_profile,
    split_classification,
)
from shadowreduce.snf import diagonal, smith_normal_form


def _rows(cx, roles):
    idx = [i for i, c in enumerate(cx.c1) if c.role in roles]
    return [[cx.d2[i][j] for j in range(len(cx.c2))] for i in idx]


def test_disk_complex():
    cx = build_chain_complex(G(DISK))
    assert (len(cx.c0), len(cx.c1), len(cx.c2)) == (1, 1, 1)
    assert [abs(x) for x in cx.d2[0]] == [1]
    assert cx.boundary_squared_is_zero()


def test_rp2_relations():
    cx = build_chain_complex(G(RP2))
    circle, core = _rows(cx, {"circle"}), _rows(cx, {"core"})
    # columns: the disk face, the Moebius face
    assert [abs(x) for x in circle[0]] == [1, 1]
    assert core[0] == [0, -2]
    assert diagonal(smith_normal_form(circle + core)[1]) == [1, 2]


def test_y3_relations():
    cx = build_chain_complex(G(D_Y3))
    assert _rows(cx, {"core"})[0] == [0, -3]


@pytest.mark.parametrize(
    "text, betti, torsion",
    [
        (DISK, (1, 0, 0), ()),
        (SPHERE, (1, 0, 1), ()),
        (RP2, (1, 0, 0), (2,)),
        (D_Y3, (1, 0, 0), (3,)),
        (PANTS_3B, (1, 2, 0), ()),
        (ANNULUS, (1, 1, 0), ()),
        (PANTS_CYCLE, (1, 3, 0), ()),
    ],
)
def test_profiles(text, betti, torsion):
    p = homology_profile(G(text))
    assert p.betti == betti
    assert p.torsion1 == torsion
    assert p.torsion0 == () and p.torsion2 == ()


def test_two_routes_agree_on_probes():
    for text in (DISK, SPHERE, RP2, D_Y3, PANTS_3B, ANNULUS, PANTS_CYCLE):
        g = G(text)
        a, b = homology_profile(g), reduced_profile(g)
        assert (a.betti, a.torsion1) == (b.betti, b.torsion1)


def test_self_loop_graphs():
    # pants whose two legs are glued to each other, third leg free
    for sign in (1, -1):
        g = G(f"vertex 1 P / vertex 2 B / edge 1 1.1 1.2 sign={sign} / edge 2 1.3 2.1")
        assert homology_profile(g).betti == (1, 2, 0)
    y12 = G("vertex 1 Y12 / edge 1 1.1 1.2")
    assert homology_profile(y12).betti == (1, 1, 0)
    assert homology_profile(y12).torsion1 == (3,)
    assert reduced_profile(y12).torsion1 == (3,)


def test_is_acyclic_examples():
    assert is_acyclic(G(DISK))
    assert not is_acyclic(G(SPHERE))
    assert not is_acyclic(G(RP2))


def test_profile_json():
    assert homology_profile(G(DISK)).to_json() == {"betti": [1, 0, 0], "torsion1": [], "euler": 1, "acyclic": True}


def test_euler_examples(example8):
    assert euler_characteristic(G(DISK)) == 1
    assert euler_characteristic(G(PANTS_3B)) == -1
    assert euler_characteristic(example8) == 1


def test_empty_graph_has_no_homology():
    p = homology_profile(MartelliGraph({}, {}))
    assert p.betti == (0, 0, 0)


@given(st.integers(0, 100_000), st.integers(2, 18))
def test_random_complexes(seed, n):
    g = random_graph(seed, n)
    cx = build_chain_complex(g)
    assert cx.boundary_squared_is_zero()
    with checks.checked_mode():
        p = homology_profile(g)
    assert p.betti[0] - p.betti[1] + p.betti[2] == p.euler == euler_characteristic(g)
    assert p.torsion2 == ()
    r = reduced_profile(g)
    assert (p.betti, p.torsion1) == (r.betti, r.torsion1)


@given(st.integers(0, 100_000), st.integers(2, 18), st.data())
def test_sign_flip_on_trees(seed, n, data):
    g = random_graph(seed, n, require_tree=True)
    e = data.draw(st.sampled_from(sorted(g.edges)))
    old = g.edge(e)
    flipped = g.edit()
    flipped.replace_edge(e, Edge(old.end1, old.end2, -old.sign))
    assert homology_profile(flipped.freeze()) == homology_profile(g)


def test_cycle_forces_first_betti():
    # a cycle in the graph always carries a free class, whatever the signs
    for seed in range(200):
        g = random_graph(seed, 2 + seed % 10)
        if g.cycle_rank() and g.is_connected():
            assert homology_profile(g).betti[1] >= 1


def test_split_example_edge2(example8):
    rep = split_classification(example8, 2)
    assert rep.satisfies_lemma
    assert rep.acyclic_side == 0 and rep.s1_side == 1


def test_split_example_cap_edge(example8):
    rep = split_classification(example8, 5)
    assert rep.satisfies_lemma
    assert rep.acyclic_side == 1


def test_split_disk():
    rep = split_classification(G(DISK), 1)
    assert rep.satisfies_lemma
    assert rep.s1_side == 0 and rep.acyclic_side == 1


def test_split_needs_acyclic_ambient():
    with pytest.raises(NotAcyclicAmbient):
        split_classification(G(SPHERE), 1)
    with pytest.raises(UnknownEdge):
        split_classification(G(DISK), 2)


def test_circle_generation_detects_index_two():
    # H1 = Z generated by the single leg; the doubled leg is twice it
    g = G("vertex 1 B / vertex 2 Y12 / vertex 3 B / edge 1 1.1 2.1 / edge 2 2.2 3.1")
    assert homology_profile(g).homology_circle
    assert circle_generates_h1(g, 1)
    assert not circle_generates_h1(g, 2)


@given(st.integers(0, 100_000), st.integers(2, 30))
def test_split_lemma_on_random_acyclic(seed, n):
    g = random_graph(seed, n, require_acyclic=True)
    for e in g.edges:
        assert split_classification(g, e).satisfies_lemma
