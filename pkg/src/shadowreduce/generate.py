"""Seeded random Martelli graphs for tests and the oracle harness."""

from __future__ import annotations

import random

from .errors import GenerationExhausted
from .graph import Edge, End, MartelliGraph, VertexKind
from .homology import is_acyclic

K = VertexKind

LEAF_KINDS = (K.B, K.D, K.M, K.Y3)
BRANCH_KINDS = (K.P, K.Y111)
ALL_KINDS = tuple(K)


def _random_tree_shape(rng: random.Random, n: int) -> list[list[int]]:
    """Adjacency lists of a random tree on ``n`` vertices with degrees <= 3."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        open_ = [u for u in range(v) if len(adj[u]) < 3]
        u = rng.choice(open_)
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _wire_tree(rng: random.Random, adj: list[list[int]], kinds: list[VertexKind], signs: bool) -> MartelliGraph:
    vertices = {i + 1: kinds[i] for i in range(len(kinds))}
    free_slots = {i: list(range(1, kinds[i].slots + 1)) for i in range(len(kinds))}
    for i, kind in enumerate(kinds):
        if kind is not K.Y12:
            rng.shuffle(free_slots[i])
    edges = {}
    eid = 1
    for u in range(len(adj)):
        for w in adj[u]:
            if w > u:
                su = free_slots[u].pop()
                sw = free_slots[w].pop()
                sign = rng.choice((1, -1)) if signs else 1
                edges[eid] = Edge(End(u + 1, su), End(w + 1, sw), sign)
                eid += 1
    return MartelliGraph(vertices, edges)


def _tree_kinds(rng: random.Random, adj: list[list[int]], acyclic_counts: bool) -> list[VertexKind]:
    leaves = [v for v in range(len(adj)) if len(adj[v]) <= 1]
    branches = [v for v in range(len(adj)) if len(adj[v]) == 3]
    kinds: list[VertexKind] = [K.Y12] * len(adj)
    if acyclic_counts:
        # an acyclic tree has #B = 1 + #Y111 and #D = #P + 1
        y = rng.randint(0, len(branches))
        ys = set(rng.sample(branches, y))
        for v in branches:
            kinds[v] = K.Y111 if v in ys else K.P
        bs = set(rng.sample(leaves, min(len(leaves), 1 + y)))
        for v in leaves:
            kinds[v] = K.B if v in bs else K.D
    else:
        for v in branches:
            kinds[v] = rng.choice(BRANCH_KINDS)
        for v in leaves:
            kinds[v] = rng.choice(LEAF_KINDS)
    return kinds


def _random_tree(rng: random.Random, n: int, acyclic_counts: bool, signs: bool) -> MartelliGraph:
    adj = _random_tree_shape(rng, n)
    kinds = _tree_kinds(rng, adj, acyclic_counts)
    g = _wire_tree(rng, adj, kinds, signs)
    if any(kinds[v] is K.Y12 for v in range(n)):
        # orient each Y12 at random: swap which neighbor sees the doubled slot
        g = _shuffle_y12(rng, g)
    return g


def _shuffle_y12(rng: random.Random, g: MartelliGraph) -> MartelliGraph:
    edges = dict(g.edges)
    for v in sorted(g.vertices_of_kind(K.Y12)):
        if rng.random() < 0.5:
            continue
        for eid, e in list(edges.items()):
            ends = [e.end1, e.end2]
            for i, end in enumerate(ends):
                if end.vertex == v:
                    ends[i] = End(v, 3 - end.slot)
            edges[eid] = Edge(ends[0], ends[1], e.sign)
    return MartelliGraph(dict(g.vertices), edges)


def _random_pairing(rng: random.Random, n: int, signs: bool) -> MartelliGraph:
    kinds = [rng.choice(ALL_KINDS) for _ in range(n)]
    if sum(k.slots for k in kinds) % 2:
        # flip one vertex between odd and even slot counts
        i = rng.randrange(n)
        kinds[i] = K.Y12 if kinds[i].slots % 2 else rng.choice(LEAF_KINDS)
    slots = [End(i + 1, s) for i, k in enumerate(kinds) for s in range(1, k.slots + 1)]
    rng.shuffle(slots)
    edges = {}
    for j in range(0, len(slots), 2):
        sign = rng.choice((1, -1)) if signs else 1
        edges[j // 2 + 1] = Edge(slots[j], slots[j + 1], sign)
    return MartelliGraph({i + 1: k for i, k in enumerate(kinds)}, edges)


# Subtree grammar behind a decomposition circle.  "A" sides are acyclic
# (the circle bounds), "S" sides are homology circles generated by the
# circle.  Gluing an A side to an S side along one edge gives an acyclic
# polyhedron, and every acyclic tree arises this way.
_PRODUCTIONS = {
    "A": ((K.P, ("A", "A")), (K.Y111, ("A", "S")), (K.Y12, ("A",))),
    "S": ((K.P, ("A", "S")), (K.Y111, ("S", "S")), (K.Y12, ("S",))),
}
_LEAF = {"A": K.D, "S": K.B}


def _grammar_tree(rng: random.Random, n: int, signs: bool) -> MartelliGraph:
    vertices: dict[int, VertexKind] = {}
    edges: dict[int, Edge] = {}

    def new_vertex(kind: VertexKind) -> int:
        vid = len(vertices) + 1
        vertices[vid] = kind
        return vid

    def connect(a: End, b: End) -> None:
        sign = rng.choice((1, -1)) if signs else 1
        pair = (a, b) if rng.random() < 0.5 else (b, a)
        edges[len(edges) + 1] = Edge(pair[0], pair[1], sign)

    size_a = rng.randint(1, n - 1)
    # each job: (side type, size, end waiting for this subtree's circle)
    jobs: list[tuple[str, int, End | None]] = [("A", size_a, None), ("S", n - size_a, None)]
    roots: list[End] = []
    while jobs:
        side, size, parent = jobs.pop()
        if size == 1:
            kind = _LEAF[side]
            children: tuple[str, ...] = ()
        else:
            options = [p for p in _PRODUCTIONS[side] if (len(p[1]) == 1) or size >= 3]
            weights = [1 if k is K.Y12 else 3 for k, _ in options]
            kind, children = rng.choices(options, weights)[0]
        v = new_vertex(kind)
        if kind is K.Y12:
            # the circle toward the parent sits on the doubled slot for A sides
            up, down = (2, [1]) if side == "A" else (1, [2])
        else:
            order = list(range(1, kind.slots + 1))
            rng.shuffle(order)
            up, down = order[0], order[1:]
        here = End(v, up)
        if parent is None:
            roots.append(here)
        else:
            connect(parent, here)
        if len(children) == 1:
            jobs.append((children[0], size - 1, End(v, down[0])))
        elif len(children) == 2:
            k1 = rng.randint(1, size - 2)
            kids = list(children)
            rng.shuffle(kids)
            jobs.append((kids[0], k1, End(v, down[0])))
            jobs.append((kids[1], size - 1 - k1, End(v, down[1])))
    connect(roots[0], roots[1])
    # relabel vertices at random so ids carry no structure
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    relabel = dict(zip(sorted(vertices), perm))
    verts = {relabel[v]: k for v, k in vertices.items()}
    eds = {
        eid: Edge(End(relabel[e.end1.vertex], e.end1.slot), End(relabel[e.end2.vertex], e.end2.slot), e.sign)
        for eid, e in edges.items()
    }
    return MartelliGraph(verts, eds)


def random_graph(
    seed: int,
    n: int,
    require_acyclic: bool = False,
    require_tree: bool = False,
    signs: bool = True,
    max_tries: int = 2000,
) -> MartelliGraph:
    """A well-formed graph with exactly ``n`` vertices, deterministic in ``seed``.

    With ``require_acyclic`` candidates come from a subtree grammar (and, for
    small ``n``, from unconstrained trees with the right piece counts); each
    candidate is kept only if an exact homology computation confirms it.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(f"{seed}:{n}:{int(require_acyclic)}:{int(require_tree)}")
    for _ in range(max_tries):
        if require_acyclic:
            if n <= 8 and rng.random() < 0.5:
                g = _random_tree(rng, n, acyclic_counts=True, signs=signs)
            else:
                g = _grammar_tree(rng, n, signs)
            if is_acyclic(g):
                return g
        elif require_tree:
            return _random_tree(rng, n, acyclic_counts=False, signs=signs)
        else:
            return _random_pairing(rng, n, signs)
    raise GenerationExhausted(f"no acyclic graph with {n} vertices after {max_tries} tries")
