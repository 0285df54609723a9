"""Random contexts around each move's before-pattern."""

import random

from shadowreduce.generate import random_graph
from shadowreduce.moves import MoveKind, applicable_moves


def move_contexts(kind: MoveKind, count: int, seed: int = 0):
    """``count`` pairs (graph, move) with ``move`` of ``kind`` applicable.

    Graphs alternate between random acyclic trees and unconstrained random
    graphs; the instance is drawn at random among the matches.
    """
    rng = random.Random(f"contexts:{kind.value}:{seed}")
    found = 0
    attempt = 0
    while found < count:
        attempt += 1
        acyclic = attempt % 2 == 0
        g = random_graph(rng.randrange(2**32), rng.randint(3, 30), require_acyclic=acyclic)
        moves = [m for m in applicable_moves(g) if m.kind is kind]
        if moves:
            found += 1
            yield g, rng.choice(moves)
