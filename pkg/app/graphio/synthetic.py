"""
Small synthetic graphs for checks and tests.
"""
import numpy as np
import scipy.sparse as sp

from graphio.graph import Graph, adjacency_from_edges, normalize_features

SIX_NODE_EDGES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]


def six_node_graph():
    """Two triangles joined by the edge (2, 3)."""
    rows, cols = zip(*SIX_NODE_EDGES)
    X = np.array(
        [
            [1, 0, 1, 0],
            [1, 1, 0, 0],
            [0, 1, 1, 0],
            [0, 1, 0, 1],
            [0, 0, 1, 1],
            [1, 0, 0, 1],
        ],
        dtype=np.float64,
    )
    return Graph(
        name="six",
        X=normalize_features(sp.csr_matrix(X)),
        A=adjacency_from_edges(6, np.array(rows), np.array(cols)),
        y=np.array([0, 0, 0, 1, 1, 1]),
        num_classes=2,
        train=np.array([0, 3]),
        val=np.array([1, 4]),
        test=np.array([2, 5]),
        num_raw_edges=len(SIX_NODE_EDGES),
    )


def block_graph(n=12, d=8, C=2, seed=0, p_in=0.5, p_out=0.05, train_per_class=2):
    """Stochastic block graph with class-correlated binary features.

    Node i has label i % C; consecutive nodes are chained so no node is
    isolated. The first `train_per_class * C` nodes form the training set,
    the rest is split evenly into validation and test.
    """
    generator = np.random.default_rng(seed)
    y = np.arange(n) % C
    same = y[:, None] == y[None, :]
    probs = np.where(same, p_in, p_out)
    upper = np.triu(generator.random((n, n)) < probs, k=1)
    upper[np.arange(n - 1), np.arange(1, n)] = True
    rows, cols = np.nonzero(upper)

    prototypes = generator.random((C, d)) < 0.5
    noise = generator.random((n, d)) < 0.15
    X = (prototypes[y] ^ noise).astype(np.float64)
    X[X.sum(axis=1) == 0, 0] = 1.0

    num_train = train_per_class * C
    rest = np.arange(num_train, n)
    half = rest.size // 2
    return Graph(
        name=f"block{n}",
        X=normalize_features(sp.csr_matrix(X)),
        A=adjacency_from_edges(n, rows, cols),
        y=y,
        num_classes=C,
        train=np.arange(num_train),
        val=rest[:half],
        test=rest[half:],
        num_raw_edges=rows.size,
    )
