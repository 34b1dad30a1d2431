"""
Dataset ingestion and the canonical on-disk graph format.

A canonical dataset directory holds:

    meta.json      {"name", "num_nodes", "num_features", "num_classes", ...}
    features.tsv   node_id, feature_id, value (non-zero entries, sorted)
    edges.tsv      u, v with u < v, one undirected edge per line, sorted
    labels.tsv     node_id, class_id for every node
    splits.json    {"train": [...], "val": [...], "test": [...]}
"""
import logging
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from core.exceptions import GraphLoadError, MissingFileError
from core.reports import read_json, write_json
from graphio.graph import Graph, adjacency_from_edges, normalize_features
from graphio.serializers import MetaSerializer, SplitsSerializer

logger = logging.getLogger(__name__)

FORMATS = ("content-cites",)

# Labeled training nodes per dataset; other datasets get 20 per class.
TRAIN_SIZES = {"cora": 140, "citeseer": 120}
VAL_SIZE = 500


def _find_one(raw_dir, suffix):
    matches = sorted(Path(raw_dir).glob(f"*{suffix}"))
    if not matches:
        raise MissingFileError(raw_dir, f"no *{suffix} file found")
    return matches[0]


def _read_content(path):
    """Parse `id feat_0 ... feat_{d-1} class_name` lines."""
    ids, rows, classes = [], [], []
    width = None
    with path.open() as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if width is None:
                width = len(parts) - 2
            if len(parts) - 2 != width or width < 1:
                raise GraphLoadError(
                    path,
                    f"line {lineno}: expected {width} features, "
                    f"found {len(parts) - 2}",
                )
            ids.append(parts[0])
            rows.append([float(value) for value in parts[1:-1]])
            classes.append(parts[-1])
    if not ids:
        raise GraphLoadError(path, "no nodes")
    return ids, np.asarray(rows, dtype=np.float64), classes


def _read_cites(path, index, drop_dangling):
    """Parse `cited citing` lines into deduplicated undirected pairs."""
    pairs = set()
    raw, dangling = 0, 0
    with path.open() as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise GraphLoadError(path, f"line {lineno}: expected 2 ids")
            raw += 1
            missing = [node for node in parts if node not in index]
            if missing:
                if drop_dangling:
                    dangling += 1
                    continue
                raise GraphLoadError(
                    path,
                    f"line {lineno}: node id {missing[0]!r} absent from content",
                )
            u, v = index[parts[0]], index[parts[1]]
            if u != v:
                pairs.add((min(u, v), max(u, v)))
    if dangling:
        logger.warning("dropped %d citations naming unknown nodes", dangling)
    return sorted(pairs), raw


def default_train_size(name, num_classes):
    return TRAIN_SIZES.get(name.lower(), 20 * num_classes)


def prepare_dataset(
    raw_dir,
    out_dir,
    fmt="content-cites",
    name=None,
    train_size=None,
    val_size=VAL_SIZE,
    drop_dangling=False,
):
    """Convert raw citation files into a canonical dataset directory."""
    if fmt not in FORMATS:
        raise GraphLoadError(raw_dir, f"unsupported format {fmt!r}")
    raw_dir = Path(raw_dir)
    content = _find_one(raw_dir, ".content")
    cites = _find_one(raw_dir, ".cites")
    name = name or content.stem

    ids, features, class_names = _read_content(content)
    index = {node: i for i, node in enumerate(ids)}
    if len(index) != len(ids):
        raise GraphLoadError(content, "duplicate node id")
    pairs, num_raw = _read_cites(cites, index, drop_dangling)

    classes = sorted(set(class_names))
    class_id = {label: c for c, label in enumerate(classes)}
    y = np.array([class_id[label] for label in class_names], dtype=np.int64)

    n = len(ids)
    if train_size is None:
        train_size = default_train_size(name, len(classes))
    if train_size + val_size >= n:
        raise GraphLoadError(raw_dir, f"{n} nodes cannot hold the requested splits")

    rows = np.array([u for u, _ in pairs], dtype=np.int64)
    cols = np.array([v for _, v in pairs], dtype=np.int64)
    graph = Graph(
        name=name,
        X=sp.csr_matrix(features),
        A=adjacency_from_edges(n, rows, cols),
        y=y,
        num_classes=len(classes),
        train=np.arange(train_size),
        val=np.arange(train_size, train_size + val_size),
        test=np.arange(train_size + val_size, n),
        num_raw_edges=num_raw,
    )
    save_graph(graph, out_dir)
    logger.info(
        "prepared %s: n=%d edges=%d classes=%d", name, n, graph.num_edges, graph.C
    )
    return Path(out_dir)


def save_graph(graph, out_dir):
    """Write `graph` in the canonical format."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    write_json(
        out_dir / "meta.json",
        {
            "name": graph.name,
            "num_nodes": graph.n,
            "num_features": graph.d,
            "num_classes": graph.C,
            "num_edges": graph.num_edges,
            "num_raw_edges": graph.num_raw_edges,
        },
    )

    X = sp.csr_matrix(graph.X)
    X.sort_indices()
    with (out_dir / "features.tsv").open("w") as f:
        for node in range(X.shape[0]):
            start, end = X.indptr[node], X.indptr[node + 1]
            for feature, value in zip(X.indices[start:end], X.data[start:end]):
                if value != 0:
                    f.write(f"{node}\t{feature}\t{float(value)!r}\n")

    rows, cols = graph.edges()
    np.savetxt(
        out_dir / "edges.tsv",
        np.column_stack([rows, cols]).reshape(-1, 2),
        fmt="%d",
        delimiter="\t",
    )
    np.savetxt(
        out_dir / "labels.tsv",
        np.column_stack([np.arange(graph.n), graph.y]),
        fmt="%d",
        delimiter="\t",
    )
    write_json(
        out_dir / "splits.json",
        {
            "train": graph.train.tolist(),
            "val": graph.val.tolist(),
            "test": graph.test.tolist(),
        },
    )
    return out_dir


def _read_table(path, columns, dtype):
    if not path.exists():
        raise MissingFileError(path)
    if path.stat().st_size == 0:
        return np.empty((0, columns), dtype=dtype)
    try:
        table = np.loadtxt(path, delimiter="\t", dtype=dtype, ndmin=2)
    except ValueError as exc:
        raise GraphLoadError(path, f"malformed line ({exc})") from exc
    if table.shape[1] != columns:
        raise GraphLoadError(path, f"expected {columns} columns, found {table.shape[1]}")
    return table


def _validated(serializer_class, path):
    if not path.exists():
        raise MissingFileError(path)
    serializer = serializer_class(data=read_json(path))
    if not serializer.is_valid():
        raise GraphLoadError(path, str(serializer.errors))
    return serializer.validated_data


def load_graph(dataset_dir, normalize=True):
    """Load and validate a canonical dataset directory.

    With `normalize` the feature rows are scaled to unit l1 norm.
    """
    dataset_dir = Path(dataset_dir)
    meta = _validated(MetaSerializer, dataset_dir / "meta.json")
    n, d, C = meta["num_nodes"], meta["num_features"], meta["num_classes"]

    path = dataset_dir / "features.tsv"
    table = _read_table(path, 3, np.float64)
    nodes, feats = table[:, 0].astype(np.int64), table[:, 1].astype(np.int64)
    bad = np.flatnonzero((nodes < 0) | (nodes >= n) | (feats < 0) | (feats >= d))
    if bad.size:
        raise GraphLoadError(path, f"line {bad[0] + 1}: index out of range")
    X = sp.coo_matrix((table[:, 2], (nodes, feats)), shape=(n, d)).tocsr()
    if X.nnz != len(table):
        raise GraphLoadError(path, "duplicate (node, feature) entry")

    path = dataset_dir / "edges.tsv"
    edges = _read_table(path, 2, np.int64)
    for lineno, (u, v) in enumerate(edges, start=1):
        if u == v:
            raise GraphLoadError(path, f"line {lineno}: self-loop in edges.tsv ({u}, {v})")
        if u > v:
            raise GraphLoadError(path, f"line {lineno}: edge ({u}, {v}) is not in u<v order")
        if v >= n or u < 0:
            raise GraphLoadError(path, f"line {lineno}: node out of range ({u}, {v})")
    if len({(u, v) for u, v in edges}) != len(edges):
        raise GraphLoadError(path, "duplicate edge")
    A = adjacency_from_edges(n, edges[:, 0], edges[:, 1])

    path = dataset_dir / "labels.tsv"
    labels = _read_table(path, 2, np.int64)
    y = np.full(n, -1, dtype=np.int64)
    for lineno, (node, label) in enumerate(labels, start=1):
        if not 0 <= node < n:
            raise GraphLoadError(path, f"line {lineno}: node {node} out of range")
        if not 0 <= label < C:
            raise GraphLoadError(path, f"line {lineno}: label {label} out of range [0, {C})")
        y[node] = label
    if np.any(y < 0):
        raise GraphLoadError(path, f"node {int(np.flatnonzero(y < 0)[0])} has no label")

    path = dataset_dir / "splits.json"
    splits = _validated(SplitsSerializer, path)
    for split in ("train", "val", "test"):
        out = [node for node in splits[split] if node >= n]
        if out:
            raise GraphLoadError(path, f"{split} node {out[0]} out of range")

    return Graph(
        name=meta["name"],
        X=normalize_features(X) if normalize else X,
        A=A,
        y=y,
        num_classes=C,
        train=np.asarray(splits["train"], dtype=np.int64),
        val=np.asarray(splits["val"], dtype=np.int64),
        test=np.asarray(splits["test"], dtype=np.int64),
        num_raw_edges=meta.get("num_raw_edges", 0),
    )
