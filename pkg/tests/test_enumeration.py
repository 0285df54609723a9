import pytest

from brute import brute_force_graphs, canonical_form
from shadowreduce.enumeration import MAX_VERTICES, connected_shapes, enumerate_graphs
from shadowreduce.errors import BoundExceeded
from shadowreduce.graph import validate

# connected well-formed graphs with exactly k vertices, all signs +1
GOLDEN = {1: 1, 2: 26, 3: 54, 4: 400, 5: 1712, 6: 11555, 7: 69458, 8: 491741}
GOLDEN_ACYCLIC = {1: 0, 2: 1, 3: 1, 4: 3, 5: 5, 6: 13, 7: 29}


def _by_size(n):
    out = {}
    for item in enumerate_graphs(n):
        out.setdefault(len(item.graph), []).append(item)
    return out


def test_empty_stream():
    assert list(enumerate_graphs(0)) == []


def test_bound():
    assert MAX_VERTICES == 8
    with pytest.raises(BoundExceeded):
        list(enumerate_graphs(9))


def test_two_vertex_graphs():
    items = _by_size(2)[2]
    pairs = {tuple(sorted(k.value for k in it.graph.vertices.values())) for it in items}
    for expected in [("B", "D"), ("D", "D"), ("D", "M"), ("D", "Y3"), ("B", "B"), ("B", "M")]:
        assert expected in pairs
    acyclic = [it.graph for it in items if it.acyclic]
    assert len(acyclic) == 1
    assert acyclic[0].is_disk_graph()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_brute_force(n):
    mine = [canonical_form(g) for g in enumerate_graphs(n, with_profiles=False) if len(g) == n]
    assert len(mine) == len(set(mine))
    assert set(mine) == brute_force_graphs(n)


def test_golden_counts_up_to_six():
    sizes = _by_size(6)
    assert {k: len(v) for k, v in sizes.items()} == {k: GOLDEN[k] for k in range(1, 7)}
    assert {k: sum(it.acyclic for it in v) for k, v in sizes.items()} == {k: GOLDEN_ACYCLIC[k] for k in range(1, 7)}
    for items in sizes.values():
        for it in items:
            assert validate(it.graph).well_formed and it.graph.is_connected()


def test_golden_count_eight():
    counts = {}
    for g in enumerate_graphs(8, with_profiles=False):
        counts[len(g)] = counts.get(len(g), 0) + 1
    assert counts == GOLDEN


def test_shapes_are_connected_with_bounded_degree():
    for level in connected_shapes(5)[2:]:
        for s in level:
            assert all(1 <= d <= 3 for d in s.degrees())
