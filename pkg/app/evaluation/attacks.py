"""
Evaluation-time attacks against a trained model.
"""
import logging

import numpy as np

from attack.baselines import dice_flips, random_flips
from attack.perturbation import FlipSet, edge_budget
from attack.pgd import generate_flips
from core import rng
from train.phases import rst_labels

logger = logging.getLogger(__name__)

ATTACKS = {"ce-pgd": "CE", "cw-pgd": "CW", "random": None, "dice": None}

# Short names used in table rows.
LABELS = {"ce-pgd": "CE-PGD", "cw-pgd": "CW-PGD", "random": "Random", "dice": "DICE"}


def attack_name(loss_kind):
    return "ce-pgd" if loss_kind == "CE" else "cw-pgd"


def victim_set(params, graph, mode, linear_head=False):
    """(nodes, labels) the attacker targets."""
    if mode == "train":
        return graph.train, graph.y
    if mode == "test-with-true-labels":
        return graph.test, graph.y
    if mode == "all-with-pseudo-labels":
        return np.arange(graph.n), rst_labels(params, graph, linear_head).labels
    raise ValueError(f"Unknown victim mode {mode!r}.")


def epsilon_key(epsilon):
    """Integer stream key for a perturbation rate."""
    return int(round(epsilon * 10000))


def attack_graph(params, graph, method, epsilon, cfg, generator=None, iters=None):
    """Flips produced by `method` at rate `epsilon` against `params`."""
    if method not in ATTACKS:
        raise ValueError(f"Unknown attack {method!r}; expected one of {', '.join(ATTACKS)}.")
    if generator is None:
        generator = rng.substream(cfg.seed, "attack", epsilon_key(epsilon))
    if epsilon == 0:
        return FlipSet.empty(graph.n)
    budget = edge_budget(epsilon, graph.num_edges)
    if method == "random":
        return random_flips(graph, budget, generator)
    if method == "dice":
        return dice_flips(graph, budget, generator)

    settings = cfg.attack_settings(
        iters=cfg.eval_attack_iters if iters is None else iters,
        loss_kind=ATTACKS[method],
        epsilon=epsilon,
    )
    nodes, labels = victim_set(params, graph, cfg.victim, cfg.linear_head)
    outcome = generate_flips(params, graph, settings, nodes, labels, generator)
    logger.info(
        "attack %s epsilon=%s budget=%d flips=%d objective=%.6g",
        method, epsilon, budget, len(outcome.flips), outcome.objective,
    )
    return outcome.flips
