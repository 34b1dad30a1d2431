"""
Helpers building raw and canonical datasets on disk for tests.
"""
from pathlib import Path

from graphio.datasets import save_graph
from graphio.synthetic import block_graph, six_node_graph

TOY_CONTENT = [
    "p0 1 0 0 1 ml",
    "p1 0 1 0 0 db",
    "p2 1 1 0 0 ml",
]
TOY_CITES = ["p0 p1", "p1 p2", "p2 p1"]


def write_raw(directory, content=None, cites=None, stem="toy"):
    """Create and return a raw content-cites directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = TOY_CONTENT if content is None else content
    (directory / f"{stem}.content").write_text("\n".join(lines) + "\n")
    lines = TOY_CITES if cites is None else cites
    (directory / f"{stem}.cites").write_text("\n".join(lines) + "\n")
    return directory


def write_dataset(directory, graph=None):
    """Create and return a canonical dataset directory."""
    return save_graph(graph if graph is not None else six_node_graph(), directory)


def small_graph(n=12, seed=0):
    """Create and return a block graph with two classes."""
    return block_graph(n=n, d=8, C=2, seed=seed)
