"""Exhaustive enumeration of small connected Martelli graphs.

Shapes (connected multigraphs with loops, every degree 1..3) are grown one
vertex at a time; removing a leaf of a spanning tree keeps a graph
connected, so growing by one vertex reaches every shape.  Shapes are
deduplicated with a Weisfeiler-Lehman hash bucket plus an exact VF2 test.
Each shape is then labelled with vertex kinds and ``Y12`` orientations,
keeping one labelling per orbit of the shape's automorphism group.

All edge signs are +1.  On a tree every sign assignment is equivalent to
this one by flipping vertices, so the acyclic graphs are unaffected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .errors import BoundExceeded
from .graph import Edge, End, MartelliGraph, VertexKind, parse_graph
from .homology import HomologyProfile, homology_profile

K = VertexKind
MAX_VERTICES = 8

_KINDS_BY_DEGREE = {1: (K.B, K.D, K.M, K.Y3), 2: (K.Y12,), 3: (K.P, K.Y111)}


@dataclass(frozen=True)
class Shape:
    """Multigraph on vertices ``0..n-1``; ``edges`` may repeat and hold loops."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, w in self.edges:
            deg[u] += 1
            deg[w] += 1
        return deg

    def simple(self) -> nx.Graph:
        """Simple graph carrying loop counts on nodes and multiplicities on edges."""
        h = nx.Graph()
        for v in range(self.n):
            h.add_node(v, loops=0)
        for u, w in self.edges:
            if u == w:
                h.nodes[u]["loops"] += 1
            elif h.has_edge(u, w):
                h.edges[u, w]["mult"] += 1
            else:
                h.add_edge(u, w, mult=1)
        for v in h:
            h.nodes[v]["tag"] = str(h.nodes[v]["loops"])
        for u, w in h.edges:
            h.edges[u, w]["tag"] = str(h.edges[u, w]["mult"])
        return h


def _node_match(a: dict, b: dict) -> bool:
    return a["loops"] == b["loops"]


def _edge_match(a: dict, b: dict) -> bool:
    return a["mult"] == b["mult"]


def _grow(shape: Shape) -> Iterator[Shape]:
    deg = shape.degrees()
    new = shape.n
    room = [v for v in range(shape.n) if deg[v] < 3]
    # the new vertex gets 1..3 half-edges: links to old vertices plus loops
    for links in range(1, 4):
        for targets in itertools.combinations_with_replacement(room, links):
            counts = {v: targets.count(v) for v in set(targets)}
            if any(deg[v] + c > 3 for v, c in counts.items()):
                continue
            base = shape.edges + tuple((v, new) for v in targets)
            yield Shape(shape.n + 1, base)
            if links == 1:
                yield Shape(shape.n + 1, base + ((new, new),))


def _dedupe(shapes: list[Shape]) -> list[Shape]:
    buckets: dict[str, list[tuple[Shape, nx.Graph]]] = {}
    out = []
    for s in shapes:
        a = s.simple()
        key = nx.weisfeiler_lehman_graph_hash(a, node_attr="tag", edge_attr="tag", iterations=3)
        bucket = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(a, b, node_match=_node_match, edge_match=_edge_match) for _, b in bucket):
            continue
        bucket.append((s, a))
        out.append(s)
    return out


def connected_shapes(n: int) -> list[list[Shape]]:
    """``levels[k]``: connected shapes on ``k`` vertices with degrees <= 3."""
    levels: list[list[Shape]] = [[], [Shape(1, ()), Shape(1, ((0, 0),))]]
    for k in range(2, n + 1):
        levels.append(_dedupe([t for s in levels[k - 1] for t in _grow(s)]))
    return levels[: n + 1]


def _automorphisms(shape: Shape) -> list[list[int]]:
    a = shape.simple()
    matcher = GraphMatcher(a, a, node_match=_node_match, edge_match=_edge_match)
    return [[m[v] for v in range(shape.n)] for m in matcher.isomorphisms_iter()]


def _labellings(shape: Shape) -> Iterator[tuple[tuple[VertexKind, ...], tuple[int, ...]]]:
    """Kind per vertex, plus per vertex the far end of its doubled slot (-1 if none).

    A ``Y12`` on a loop points at itself; parallel edges to one neighbor
    give a single choice.
    """
    deg = shape.degrees()
    targets: dict[int, set[int]] = {v: set() for v in range(shape.n)}
    for u, w in shape.edges:
        targets[u].add(w)
        targets[w].add(u)
    kind_choices = [_KINDS_BY_DEGREE[d] for d in deg]
    pick_choices = [sorted(targets[v]) if deg[v] == 2 else [-1] for v in range(shape.n)]
    for kinds in itertools.product(*kind_choices):
        for pick in itertools.product(*pick_choices):
            yield kinds, pick


def _label_key(kinds, pick, perm: list[int]) -> tuple:
    n = len(kinds)
    k_img: list = [None] * n
    p_img = [-1] * n
    for v in range(n):
        k_img[perm[v]] = kinds[v].value
        if pick[v] >= 0:
            p_img[perm[v]] = perm[pick[v]]
    return tuple(k_img), tuple(p_img)


def _to_graph(shape: Shape, kinds, pick) -> MartelliGraph:
    vertices = {v + 1: kinds[v] for v in range(shape.n)}
    next_slot = {v: 1 for v in range(shape.n)}
    doubled_done: set[int] = set()

    def slot(v: int, far: int) -> int:
        if kinds[v] is K.Y12:
            if far == pick[v] and v not in doubled_done:
                doubled_done.add(v)
                return 2
            return 1
        s = next_slot[v]
        next_slot[v] += 1
        return s

    edges = {}
    for i, (u, w) in enumerate(shape.edges):
        edges[i + 1] = Edge(End(u + 1, slot(u, w)), End(w + 1, slot(w, u)))
    return MartelliGraph(vertices, edges)


def labelled_graphs(shape: Shape) -> Iterator[MartelliGraph]:
    deg = shape.degrees()
    if shape.n == 0 or not all(1 <= d <= 3 for d in deg):
        return
    if shape.edges == ((0, 1), (0, 1)):
        # two Y12 joined twice: the target model cannot tell the aligned
        # pairing (doubled to doubled) from the crossed one
        yield parse_graph("vertex 1 Y12\nvertex 2 Y12\nedge 1 1.1 2.1\nedge 2 1.2 2.2\n")
        yield parse_graph("vertex 1 Y12\nvertex 2 Y12\nedge 1 1.1 2.2\nedge 2 1.2 2.1\n")
        return
    autos = _automorphisms(shape)
    identity = list(range(shape.n))
    for kinds, pick in _labellings(shape):
        mine = _label_key(kinds, pick, identity)
        if all(_label_key(kinds, pick, perm) >= mine for perm in autos):
            yield _to_graph(shape, kinds, pick)


@dataclass(frozen=True)
class Enumerated:
    graph: MartelliGraph
    profile: HomologyProfile

    @property
    def acyclic(self) -> bool:
        return self.profile.acyclic


def enumerate_graphs(n: int, with_profiles: bool = True) -> Iterator[Enumerated | MartelliGraph]:
    """Every connected well-formed graph with at most ``n`` vertices, once.

    Order is deterministic: by vertex count, then shape, then labelling.
    """
    if n > MAX_VERTICES:
        raise BoundExceeded(f"enumeration is bounded at {MAX_VERTICES} vertices, got {n}")
    if n < 1:
        return
    for level in connected_shapes(n)[1:]:
        for shape in level:
            for g in labelled_graphs(shape):
                yield Enumerated(g, homology_profile(g)) if with_profiles else g
