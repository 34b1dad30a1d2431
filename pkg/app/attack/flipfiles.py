"""
flips.tsv: one `u<TAB>v<TAB>op` line per flipped pair, op in {add, del}.

Files produced by other attack tools are read the same way.
"""
from pathlib import Path

import numpy as np

from attack.perturbation import FlipSet
from core.exceptions import FlipsFormatError, MissingFileError

OPS = ("add", "del")


def write_flips(path, flips, A):
    """Write a FlipSet against clean adjacency A, sorted by (u, v)."""
    rows, cols = flips.pairs()
    order = np.lexsort((cols, rows))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        for u, v in zip(rows[order], cols[order]):
            op = "del" if A[u, v] else "add"
            f.write(f"{u}\t{v}\t{op}\n")
    return path


def read_flips(path, A):
    """Parse a flips file and check every op against clean adjacency A."""
    path = Path(path)
    if not path.exists():
        raise MissingFileError(path)
    n = A.shape[0]
    rows, cols = [], []
    with path.open() as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3 or parts[2] not in OPS:
                raise FlipsFormatError(f"{path}: line {lineno}: expected 'u v add|del'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise FlipsFormatError(f"{path}: line {lineno}: bad node id") from exc
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise FlipsFormatError(f"{path}: line {lineno}: invalid pair ({u}, {v})")
            present = bool(A[u, v])
            if present != (parts[2] == "del"):
                raise FlipsFormatError(
                    f"{path}: line {lineno}: {parts[2]} disagrees with the clean graph"
                )
            rows.append(u)
            cols.append(v)
    return flip_set_from_edges(n, rows, cols)


def flip_set_from_edges(n, rows, cols):
    """FlipSet from endpoint lists in either orientation."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if rows.size == 0:
        return FlipSet.empty(n)
    return FlipSet.from_pairs(n, np.minimum(rows, cols), np.maximum(rows, cols))
