"""
Loss terms, as tape builders and as plain functions on logit matrices.
"""
import numpy as np

from gradkit.ops import softmax_rows
from gradkit.tape import Tape, forward

LOG_FLOOR = 1e-12


def _nodes(node_set):
    nodes = np.asarray(node_set, dtype=np.int64)
    if nodes.size == 0:
        raise ValueError("Node set is empty.")
    return nodes


def add_ce(tape, logits, labels, node_set, mean=False):
    """-sum_i log softmax(Z_i)[y_i] over `node_set`."""
    nodes = _nodes(node_set)
    rows = tape.gather_rows(logits, nodes)
    picked = tape.pick(tape.log_softmax(rows), np.asarray(labels)[nodes])
    factor = -1.0 / nodes.size if mean else -1.0
    return tape.scale(tape.sum(picked), factor)


def add_cw(tape, logits, labels, node_set, kappa=0.0):
    """sum_i max(Z_i,y - max_{c != y} Z_i,c, -kappa) over `node_set`."""
    nodes = _nodes(node_set)
    targets = np.asarray(labels)[nodes]
    rows = tape.gather_rows(logits, nodes)
    margin = tape.sub(tape.pick(rows, targets), tape.row_max_excluding(rows, targets))
    return tape.sum(tape.maximum(margin, -kappa))


def add_kl(tape, adv, nat, node_set=None):
    """sum_i KL(softmax(adv_i) || softmax(nat_i)), adversarial side first."""
    if node_set is not None:
        nodes = _nodes(node_set)
        adv = tape.gather_rows(adv, nodes)
        nat = tape.gather_rows(nat, nodes)
    p_adv = tape.softmax(adv)
    gap = tape.sub(
        tape.log(p_adv, floor=LOG_FLOOR),
        tape.log(tape.softmax(nat), floor=LOG_FLOOR),
    )
    return tape.sum(tape.mul(p_adv, gap))


def _evaluate(builder, *matrices):
    tape = Tape()
    names = [tape.input(f"M{i}") for i in range(len(matrices))]
    loss = builder(tape, *names)
    values = forward(tape, {name: m for name, m in zip(names, matrices)})
    return float(values[loss][0, 0])


def ce_loss(Z, labels, node_set, mean=False):
    return _evaluate(lambda t, z: add_ce(t, z, labels, node_set, mean), Z)


def cw_margin(Z, labels, node_set, kappa=0.0):
    if Z.shape[1] < 2:
        raise ValueError("The margin needs at least two classes.")
    return _evaluate(lambda t, z: add_cw(t, z, labels, node_set, kappa), Z)


def kl_smooth(Z_adv, Z_nat, node_set=None):
    if Z_adv.shape != Z_nat.shape:
        raise ValueError(f"Shape mismatch: {Z_adv.shape} vs {Z_nat.shape}.")
    return _evaluate(lambda t, a, n: add_kl(t, a, n, node_set), Z_adv, Z_nat)


def softmax(Z):
    return softmax_rows(np.asarray(Z, dtype=np.float64))


def predict(Z):
    """Row-wise argmax; ties go to the smallest class index."""
    return np.asarray(Z).argmax(axis=1)


def accuracy(pred, labels, node_set):
    nodes = _nodes(node_set)
    return float(np.mean(np.asarray(pred)[nodes] == np.asarray(labels)[nodes]))
