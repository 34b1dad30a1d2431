"""
Edge-flip perturbations over unordered node pairs.

Both the relaxed vector and the binary flip set live on the row-major upper
triangle (u < v), so the symmetric adjacency never drifts out of symmetry.
"""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from graphio.graph import complement_mask, num_pairs, pair_index, pair_position


def edge_budget(epsilon, num_edges):
    """floor(epsilon * |E|) unordered flips."""
    return int(np.floor(epsilon * num_edges + 1e-9))


@dataclass(eq=False)
class PerturbVector:
    """Relaxed flip probabilities s in [0, 1] over every pair, with a budget."""

    s: np.ndarray
    budget: int
    n: int

    @classmethod
    def zeros(cls, n, budget):
        return cls(s=np.zeros(num_pairs(n)), budget=int(budget), n=int(n))

    def pairs(self):
        return pair_index(self.n)


@dataclass(eq=False)
class FlipSet:
    """Binary flip set stored as sorted pair positions."""

    positions: np.ndarray
    n: int

    @classmethod
    def empty(cls, n):
        return cls(positions=np.empty(0, dtype=np.int64), n=int(n))

    @classmethod
    def from_mask(cls, mask, n):
        return cls(positions=np.flatnonzero(mask).astype(np.int64), n=int(n))

    @classmethod
    def from_pairs(cls, n, rows, cols):
        positions = pair_position(n, np.asarray(rows, np.int64), np.asarray(cols, np.int64))
        return cls(positions=np.unique(positions), n=int(n))

    def __len__(self):
        return int(self.positions.size)

    def mask(self):
        vector = np.zeros(num_pairs(self.n))
        vector[self.positions] = 1.0
        return vector

    def pairs(self):
        rows, cols = pair_index(self.n)
        return rows[self.positions], cols[self.positions]


def relaxed_adjacency(A, s):
    """Dense A + (complement(A) - A) * S with S the symmetric matrix of s."""
    dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
    n = dense.shape[0]
    values = s.s if isinstance(s, PerturbVector) else np.asarray(s, dtype=np.float64)
    S = np.zeros((n, n))
    rows, cols = pair_index(n)
    S[rows, cols] = values
    S[cols, rows] = values
    return dense + (complement_mask(dense) - dense) * S


def apply_flips(A, flips):
    """Toggle each flipped pair of a binary adjacency; returns CSR."""
    A = sp.csr_matrix(A, dtype=np.float64)
    if len(flips) == 0:
        return A.copy()
    rows, cols = flips.pairs()
    ones = np.ones(2 * rows.size)
    F = sp.coo_matrix(
        (ones, (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=A.shape,
    ).tocsr()
    flipped = (A + F - 2 * A.multiply(F)).tocsr()
    flipped.eliminate_zeros()
    return flipped
