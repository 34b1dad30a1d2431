"""
Tapes: ordered records of primitive applications over named tensors.

A tape is built once with the builder methods and then replayed by
`forward` and differentiated by `grad` any number of times. Node names are
unique and every node's inputs precede it, so the list order is a
topological order.
"""
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from core.exceptions import NonFiniteError, ShapeError, TapeError
from gradkit.ops import PRIMITIVES, flip_normalize_attrs


class Node(NamedTuple):
    name: str
    op: str
    inputs: tuple
    attrs: dict


class Tape:
    """Builder and container for a differentiable program."""

    def __init__(self):
        self.inputs = {}
        self.nodes = []
        self._names = set()

    def __len__(self):
        return len(self.nodes)

    def _claim(self, name):
        if name in self._names:
            raise TapeError(f"Duplicate tape name {name!r}.")
        self._names.add(name)
        return name

    def _known(self, name):
        if name not in self._names:
            raise TapeError(f"Tape has no node or input named {name!r}.")
        return name

    def input(self, name, shape=None):
        """Declare an input; `None` in `shape` matches any length."""
        self.inputs[self._claim(name)] = shape
        return name

    def apply(self, op, *inputs, name=None, **attrs):
        if op not in PRIMITIVES:
            raise TapeError(f"Unknown primitive {op!r}.")
        inputs = tuple(self._known(i) for i in inputs)
        name = self._claim(name or f"{op}_{len(self.nodes)}")
        self.nodes.append(Node(name, op, inputs, attrs))
        return name

    def matmul(self, a, b, name=None):
        return self.apply("matmul", a, b, name=name)

    def mul(self, a, b, name=None):
        return self.apply("mul", a, b, name=name)

    def add(self, a, b, name=None):
        return self.apply("add", a, b, name=name)

    def sub(self, a, b, name=None):
        return self.apply("sub", a, b, name=name)

    def scale(self, a, factor, name=None):
        return self.apply("scale", a, name=name, factor=float(factor))

    def relu(self, a, name=None):
        return self.apply("relu", a, name=name)

    def maximum(self, a, floor, name=None):
        return self.apply("maximum", a, name=name, floor=float(floor))

    def softmax(self, a, name=None):
        return self.apply("softmax", a, name=name)

    def log_softmax(self, a, name=None):
        return self.apply("log_softmax", a, name=name)

    def log(self, a, floor=0.0, name=None):
        return self.apply("log", a, name=name, floor=float(floor))

    def power(self, a, exponent, name=None):
        return self.apply("power", a, name=name, exponent=float(exponent))

    def sum(self, a, axis=None, name=None):
        return self.apply("sum", a, name=name, axis=axis)

    def gather_rows(self, a, index, name=None):
        return self.apply("gather_rows", a, name=name, index=np.asarray(index, dtype=np.int64))

    def pick(self, a, cols, name=None):
        return self.apply("pick", a, name=name, cols=np.asarray(cols, dtype=np.int64))

    def row_max_excluding(self, a, cols, name=None):
        return self.apply(
            "row_max_excluding", a, name=name, cols=np.asarray(cols, dtype=np.int64)
        )

    def diag_scale(self, v, m, side="left", name=None):
        """diag(v) @ m for side='left', m @ diag(v) for side='right'."""
        if side not in ("left", "right"):
            raise TapeError(f"Unknown side {side!r}.")
        return self.apply("diag_scale", v, m, name=name, side=side)

    def scatter_pairs(self, s, n, name=None):
        """Symmetric n x n matrix from an (n(n-1)/2, 1) upper-triangle vector."""
        return self.apply("scatter_pairs", s, name=name, n=int(n))

    def flip_normalize(self, s, A, name=None):
        """D^-1/2 (A + (1 - 2A) * S + I) D^-1/2 for the pair vector s, with A
        a fixed 0/1 adjacency. Keeps a single n x n value on the tape."""
        return self.apply("flip_normalize", s, name=name, **flip_normalize_attrs(A))


def _check_finite(name, value):
    data = value.data if sp.issparse(value) else value
    if not np.all(np.isfinite(data)):
        raise NonFiniteError(name)


def _check_shape(name, value, shape):
    if value.ndim != 2:
        raise ShapeError(f"Input {name!r} must be 2-D, got shape {value.shape}.")
    if shape is None:
        return
    for got, want in zip(value.shape, shape):
        if want is not None and got != want:
            raise ShapeError(f"Input {name!r} has shape {value.shape}, expected {shape}.")


def _coerce(value):
    if sp.issparse(value):
        return value.tocsr()
    return np.asarray(value, dtype=np.float64)


def forward(tape, inputs):
    """Evaluate every node; returns a dict of all input and node values."""
    values = {}
    for name, shape in tape.inputs.items():
        if name not in inputs:
            raise ShapeError(f"Missing tape input {name!r}.")
        value = _coerce(inputs[name])
        _check_shape(name, value, shape)
        _check_finite(name, value)
        values[name] = value

    for node in tape.nodes:
        fn, _ = PRIMITIVES[node.op]
        try:
            out = fn(node.attrs, *(values[i] for i in node.inputs))
        except ValueError as exc:
            raise ShapeError(f"Node {node.name!r} ({node.op}): {exc}") from exc
        _check_finite(node.name, out)
        values[node.name] = out
    return values


def _requires_grad(tape, wrt):
    live = set(wrt)
    for node in tape.nodes:
        if any(i in live for i in node.inputs):
            live.add(node.name)
    return live


def grad(tape, inputs, loss, wrt, values=None):
    """Gradients of the scalar node `loss` with respect to inputs `wrt`.

    Pass `values` from a previous `forward` call to skip re-evaluation.
    """
    wrt = list(wrt)
    for name in wrt:
        if name not in tape.inputs:
            raise TapeError(f"Tape has no input named {name!r}.")
    if values is None:
        values = forward(tape, inputs)
    if loss not in values:
        raise TapeError(f"Tape has no node named {loss!r}.")
    if values[loss].shape != (1, 1):
        raise ShapeError(f"Loss {loss!r} is not scalar: shape {values[loss].shape}.")

    live = _requires_grad(tape, wrt)
    adjoints = {loss: np.ones((1, 1))}
    for node in reversed(tape.nodes):
        g = adjoints.pop(node.name, None)
        if g is None:
            continue
        needs = [i in live for i in node.inputs]
        if not any(needs):
            continue
        _, vjp = PRIMITIVES[node.op]
        operands = [values[i] for i in node.inputs]
        grads = vjp(node.attrs, g, values[node.name], *operands, needs=needs)
        for name, need, g_in in zip(node.inputs, needs, grads):
            if not need:
                continue
            if name in adjoints:
                adjoints[name] = adjoints[name] + g_in
            else:
                adjoints[name] = g_in

    return {
        name: adjoints.get(name, np.zeros(values[name].shape)) for name in wrt
    }
