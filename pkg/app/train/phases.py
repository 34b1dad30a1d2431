"""
Training phases.

Phase 1 fits the network on the clean graph. Every later stage regenerates
a perturbed graph each epoch (PGD from s = 0, then Bernoulli rounding, or a
random edge removal) and takes one optimizer step on the stage's loss.
"""
import logging
from dataclasses import dataclass

import numpy as np

from attack.baselines import random_flips
from attack.perturbation import apply_flips, edge_budget
from attack.pgd import generate_flips
from core import rng
from core.exceptions import DivergenceError, NonFiniteError
from graphio.graph import normalize_adjacency
from model.losses import predict
from model.network import forward
from model.params import init_params
from train.objective import TrainingObjective
from train.optim import build_optimizer
from train.rundir import RunLog

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Stage:
    """One block of training epochs sharing a loss and a freeze pattern."""

    phase: str
    epochs: int
    regularizer: str = None
    weight: float = 0.0
    freeze_encoder: bool = False
    freeze_head: bool = False
    perturbation: str = "pgd"
    supervision: str = "rst"


@dataclass(frozen=True, eq=False)
class SoftLabels:
    """True labels on the training set, phase-1 predictions elsewhere."""

    labels: np.ndarray
    pseudo: np.ndarray

    def sources(self):
        return np.where(self.pseudo, "pseudo", "true")


def _checked_step(objective, params, adj_adv, adj_nat, phase, epoch):
    try:
        result = objective.step(params, adj_adv, adj_nat)
    except NonFiniteError as exc:
        raise DivergenceError(phase, epoch) from exc
    if not np.isfinite(result.loss):
        raise DivergenceError(phase, epoch)
    return result


def train_phase1(graph, cfg, log=None):
    """Cross-entropy training on the clean graph over the labeled nodes."""
    params = init_params(cfg.seed, graph.d, cfg.hidden, graph.C)
    log = log if log is not None else RunLog()
    if cfg.epochs_per_phase == 0:
        return params

    objective = TrainingObjective(
        graph, params.dims, graph.y, graph.train,
        linear_head=cfg.linear_head, mean_reduce=cfg.mean_reduce,
    )
    adj = normalize_adjacency(graph.A)
    optimizer = build_optimizer(cfg)
    for epoch in range(1, cfg.epochs_per_phase + 1):
        result = _checked_step(objective, params, adj, None, "phase1", epoch)
        params = optimizer.step(params, result.grads)
        log.record(epoch, "phase1", result.ce)
        logger.debug("phase1 epoch=%d L_CE=%.6g", epoch, result.ce)
    logger.info("phase1 done epochs=%d L_CE=%.6g", cfg.epochs_per_phase, result.ce)
    return params


def rst_labels(params, graph, linear_head=False):
    """Self-training labels from the clean-graph predictions of `params`."""
    Z = forward(params, normalize_adjacency(graph.A), graph.X, linear_head).Z
    labels = predict(Z).astype(np.int64)
    pseudo = np.ones(graph.n, dtype=bool)
    labels[graph.train] = graph.y[graph.train]
    pseudo[graph.train] = False
    return SoftLabels(labels=labels, pseudo=pseudo)


def _perturbed(params, graph, soft, cfg, stage, epoch):
    """Adversarial adjacency for one epoch and the attacker's objective."""
    if stage.perturbation == "random":
        budget = edge_budget(cfg.random_del_rate, graph.num_edges)
        flips = random_flips(graph, budget, rng.substream(cfg.seed, "baseline", epoch))
        return apply_flips(graph.A, flips), None
    outcome = generate_flips(
        params, graph, cfg.attack_settings(), graph.train, soft.labels,
        rng.substream(cfg.seed, "sampling", epoch),
    )
    return apply_flips(graph.A, outcome.flips), outcome.objective


def run_stage(params, graph, soft, cfg, stage, log, epoch_offset=0, on_epoch=None):
    """Train `stage.epochs` epochs; `on_epoch(phase, epoch, params)` may
    return an accuracy that is stored in the log row."""
    params = params.frozen(encoder=stage.freeze_encoder, head=stage.freeze_head)
    if stage.epochs == 0:
        return params
    if stage.supervision == "rst":
        labels = soft.labels
        nodes = np.arange(graph.n) if cfg.supervise_all else graph.train
    else:
        labels, nodes = graph.y, graph.train
    objective = TrainingObjective(
        graph, params.dims, labels, nodes, stage.regularizer, stage.weight,
        linear_head=cfg.linear_head, mean_reduce=cfg.mean_reduce,
        detach_natural=cfg.detach_natural,
    )
    adj_nat = normalize_adjacency(graph.A)
    optimizer = build_optimizer(cfg)
    for step in range(1, stage.epochs + 1):
        epoch = epoch_offset + step
        A_star, attack_loss = _perturbed(params, graph, soft, cfg, stage, epoch)
        result = _checked_step(
            objective, params, normalize_adjacency(A_star), adj_nat, stage.phase, epoch
        )
        params = optimizer.step(params, result.grads)
        accuracy = on_epoch(stage.phase, epoch, params) if on_epoch else None
        log.record(epoch, stage.phase, result.ce, result.reg, attack_loss, accuracy)
        logger.debug(
            "%s epoch=%d L_CE=%.6g R_adv=%.6g", stage.phase, epoch, result.ce, result.reg
        )
    logger.info("%s done epochs=%d", stage.phase, stage.epochs)
    return params


def phase2_stage(cfg, epochs=None, freeze=True):
    return Stage(
        phase="phase2",
        epochs=cfg.epochs_per_phase if epochs is None else epochs,
        regularizer="hidden",
        weight=cfg.alpha,
        freeze_head=freeze,
    )


def phase3_stage(cfg, epochs=None, freeze=True):
    return Stage(
        phase="phase3",
        epochs=cfg.epochs_per_phase if epochs is None else epochs,
        regularizer="logits",
        weight=cfg.beta,
        freeze_encoder=freeze,
    )


def train_phase2(params, graph, soft, cfg, log=None, epoch_offset=0, on_epoch=None):
    """Adversarial encoder training with hidden-feature smoothing; head frozen."""
    log = log if log is not None else RunLog()
    return run_stage(params, graph, soft, cfg, phase2_stage(cfg), log, epoch_offset, on_epoch)


def train_phase3(params, graph, soft, cfg, log=None, epoch_offset=0, on_epoch=None):
    """Adversarial head training with logit smoothing; encoder frozen."""
    log = log if log is not None else RunLog()
    return run_stage(params, graph, soft, cfg, phase3_stage(cfg), log, epoch_offset, on_epoch)
