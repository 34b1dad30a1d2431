"""
Two graph-convolution layers followed by a single fully connected head.

    H = relu(A_hat relu(A_hat X W1) W2)
    Z = relu(H w + b)          (plain H w + b with linear_head)
"""
from typing import NamedTuple

from gradkit.tape import Tape, forward as run_tape
from model.params import GROUPS


class ForwardOutputs(NamedTuple):
    H: object
    Z: object


def declare_params(tape, dims=None):
    """Declare W1, W2, w, b as tape inputs."""
    d, h, C = dims or (None, None, None)
    shapes = {"W1": (d, h), "W2": (h, h), "w": (h, C), "b": (1, C)}
    for name in GROUPS:
        tape.input(name, shapes[name])


def add_encoder(tape, adj, features, prefix=""):
    first = tape.relu(
        tape.matmul(adj, tape.matmul(features, "W1", name=f"{prefix}XW1")),
        name=f"{prefix}H1",
    )
    return tape.relu(
        tape.matmul(adj, tape.matmul(first, "W2", name=f"{prefix}H1W2")),
        name=f"{prefix}H",
    )


def add_head(tape, hidden, linear_head=False, prefix=""):
    logits = tape.add(tape.matmul(hidden, "w"), "b", name=f"{prefix}Zlin")
    if linear_head:
        return logits
    return tape.relu(logits, name=f"{prefix}Z")


def add_network(tape, adj, features, linear_head=False, prefix=""):
    """Append the full network; returns the (H, Z) node names."""
    hidden = add_encoder(tape, adj, features, prefix)
    return hidden, add_head(tape, hidden, linear_head, prefix)


def forward(params, adj_hat, X, linear_head=False):
    """Hidden features and logits for every node."""
    tape = Tape()
    declare_params(tape, params.dims)
    tape.input("A_hat", (X.shape[0], X.shape[0]))
    tape.input("X", (X.shape[0], params.dims[0]))
    hidden, logits = add_network(tape, "A_hat", "X", linear_head)
    values = run_tape(tape, {"A_hat": adj_hat, "X": X, **params.arrays()})
    return ForwardOutputs(H=values[hidden], Z=values[logits])
