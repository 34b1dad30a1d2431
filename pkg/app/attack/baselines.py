"""
Sampling-based baseline attacks: random edge removal and DICE.
"""
import logging

import numpy as np

from attack.perturbation import FlipSet, apply_flips
from graphio.graph import pair_position

logger = logging.getLogger(__name__)

# Rejection draws allowed per requested insertion before giving up.
MAX_DRAWS_PER_MOVE = 100


def random_flips(graph, budget, generator):
    """Delete `budget` existing edges chosen uniformly."""
    rows, cols = graph.edges()
    count = min(int(budget), rows.size)
    if count < budget:
        logger.warning("random attack applied %d of %d deletions", count, budget)
    chosen = np.sort(generator.choice(rows.size, size=count, replace=False))
    return FlipSet.from_pairs(graph.n, rows[chosen], cols[chosen])


def random_attack(graph, budget, generator):
    return apply_flips(graph.A, random_flips(graph, budget, generator))


def dice_flips(graph, budget, generator):
    """Disconnect internally, connect externally.

    Each move is a fair coin between deleting an edge whose endpoints share a
    label and inserting an edge between nodes with different labels. When
    one kind runs out the other is used; the applied count is logged if the
    budget cannot be spent.
    """
    rows, cols = graph.edges()
    y = graph.y
    internal = np.flatnonzero(y[rows] == y[cols])
    internal = internal[generator.permutation(internal.size)]
    existing = set(pair_position(graph.n, rows, cols).tolist())

    chosen = []
    taken = set()
    next_delete = 0
    can_insert = len(np.unique(y)) > 1
    while len(chosen) < budget:
        can_delete = next_delete < internal.size
        if not can_delete and not can_insert:
            break
        insert = can_insert and (not can_delete or generator.random() < 0.5)
        if not insert:
            edge = internal[next_delete]
            next_delete += 1
            chosen.append(int(pair_position(graph.n, rows[edge], cols[edge])))
            continue
        for _ in range(MAX_DRAWS_PER_MOVE):
            u, v = generator.integers(0, graph.n, size=2)
            if u == v or y[u] == y[v]:
                continue
            position = int(pair_position(graph.n, u, v))
            if position in existing or position in taken:
                continue
            taken.add(position)
            chosen.append(position)
            break
        else:
            can_insert = False

    if len(chosen) < budget:
        logger.warning("dice attack applied %d of %d moves", len(chosen), budget)
    return FlipSet(positions=np.unique(np.asarray(chosen, dtype=np.int64)), n=graph.n)


def dice_attack(graph, budget, generator):
    return apply_flips(graph.A, dice_flips(graph, budget, generator))
