"""
Graph container and adjacency preprocessing.
"""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True, eq=False)
class Graph:
    """One labeled, undirected, unweighted graph with its splits.

    `A` is a symmetric binary CSR matrix with an empty diagonal and `X` a
    CSR feature matrix (row per node). Instances are never mutated after
    loading, so they are safe to share between threads.
    """

    name: str
    X: sp.csr_matrix
    A: sp.csr_matrix
    y: np.ndarray
    num_classes: int
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    num_raw_edges: int = 0

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    @property
    def C(self):
        return self.num_classes

    @property
    def num_edges(self):
        return self.A.nnz // 2

    def edges(self):
        """Undirected edges as (u, v) arrays with u < v, sorted."""
        upper = sp.triu(self.A, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return upper.row[order].astype(np.int64), upper.col[order].astype(np.int64)

    def node_set(self, name):
        """Index array for 'train', 'val', 'test' or 'all'."""
        if name == "all":
            return np.arange(self.n)
        if name not in ("train", "val", "test"):
            raise ValueError(f"Unknown node set {name!r}.")
        return getattr(self, name)


def adjacency_from_edges(n, rows, cols):
    """Symmetric binary CSR adjacency from undirected edge arrays."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    data = np.ones(2 * rows.size)
    A = sp.coo_matrix(
        (data, (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(n, n),
    ).tocsr()
    A.sum_duplicates()
    A.data[:] = 1.0
    return A


def normalize_adjacency(A, dense_real=False):
    """Return D^-1/2 (A + I) D^-1/2 where D holds the row sums of A + I.

    Sparse binary input yields a CSR matrix. With `dense_real` the input may
    hold relaxed values in [0, 1] and the result is a dense array.
    """
    n = A.shape[0]
    if dense_real or not sp.issparse(A):
        A_tilde = np.asarray(A.toarray() if sp.issparse(A) else A, dtype=np.float64)
        A_tilde = A_tilde + np.eye(n)
    else:
        A_tilde = (sp.csr_matrix(A, dtype=np.float64) + sp.identity(n, format="csr")).tocsr()

    degree = np.asarray(A_tilde.sum(axis=1)).ravel()
    if np.any(degree <= 0):
        bad = int(np.flatnonzero(degree <= 0)[0])
        raise ValueError(f"Non-positive degree at node {bad}.")
    d_inv_sqrt = degree ** -0.5

    if sp.issparse(A_tilde):
        D = sp.diags(d_inv_sqrt)
        return (D @ A_tilde @ D).tocsr()
    return d_inv_sqrt[:, None] * A_tilde * d_inv_sqrt[None, :]


def complement_mask(A):
    """Dense complement E - I - A of a binary symmetric adjacency."""
    dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
    complement = 1.0 - dense
    np.fill_diagonal(complement, 0.0)
    return complement


def normalize_features(X):
    """Scale each row of X to unit l1 norm; all-zero rows stay zero."""
    X = sp.csr_matrix(X, dtype=np.float64)
    row_sum = np.asarray(abs(X).sum(axis=1)).ravel()
    inverse = np.zeros_like(row_sum)
    np.divide(1.0, row_sum, out=inverse, where=row_sum > 0)
    return (sp.diags(inverse) @ X).tocsr()


def num_pairs(n):
    return n * (n - 1) // 2


def pair_index(n):
    """Row-major upper-triangle pairs (u, v), u < v, one per vector slot."""
    return np.triu_indices(n, k=1)


def pair_position(n, u, v):
    """Vector slot of the unordered pair {u, v}."""
    u, v = np.minimum(u, v), np.maximum(u, v)
    return u * n - u * (u + 1) // 2 + (v - u - 1)
