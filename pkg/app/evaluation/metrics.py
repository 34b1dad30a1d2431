"""
Accuracy and attack success rate on clean or perturbed graphs.
"""
import numpy as np

from attack.perturbation import apply_flips
from graphio.graph import normalize_adjacency
from model.losses import accuracy, predict
from model.network import forward


def predictions(params, graph, flips=None, linear_head=False):
    """Predicted class per node on the graph after applying `flips`."""
    A = graph.A if flips is None else apply_flips(graph.A, flips)
    Z = forward(params, normalize_adjacency(A), graph.X, linear_head).Z
    return predict(Z)


def evaluate(params, graph, node_set=None, flips=None, linear_head=False):
    """Accuracy on `node_set` (the test set by default)."""
    nodes = graph.test if node_set is None else node_set
    return accuracy(predictions(params, graph, flips, linear_head), graph.y, nodes)


def misclassification_rate(params, graph, node_set=None, flips=None, linear_head=False):
    """Fraction of `node_set` (the test set by default) predicted wrong."""
    return 1.0 - evaluate(params, graph, node_set, flips, linear_head)


def attack_success_rate(params, graph, flips, node_set=None, linear_head=False):
    """(misclassified after the attack - misclassified before) / N.

    Negative when the flips happen to help the classifier.
    """
    nodes = np.asarray(graph.test if node_set is None else node_set)
    truth = graph.y[nodes]
    before = predictions(params, graph, None, linear_head)[nodes] != truth
    after = predictions(params, graph, flips, linear_head)[nodes] != truth
    return float(after.sum() - before.sum()) / nodes.size
