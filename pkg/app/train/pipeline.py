"""
Training methods as sequences of stages after the shared phase-1 fit.

Every adversarial method spends 2 * epochs_per_phase epochs after phase 1
so that accuracy series of different methods line up epoch for epoch.
"""
import logging
from dataclasses import dataclass, field

from train.phases import (
    Stage,
    phase2_stage,
    phase3_stage,
    rst_labels,
    run_stage,
    train_phase1,
)
from train.rundir import RunLog
from train.serializers import METHODS

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class TrainingResult:
    params: object
    log: RunLog
    soft_labels: object = None
    snapshots: dict = field(default_factory=dict)


def method_stages(cfg):
    """Stages run after phase 1 for `cfg.method`."""
    E = cfg.epochs_per_phase
    stages = {
        "gcn": [],
        "hcref": [phase2_stage(cfg), phase3_stage(cfg)],
        "hc1": [phase2_stage(cfg, epochs=2 * E)],
        "hc2": [phase3_stage(cfg, epochs=2 * E)],
        "hc_uncon": [phase2_stage(cfg, freeze=False), phase3_stage(cfg, freeze=False)],
        "cons_h": [Stage("cons_h", 2 * E, "hidden", cfg.alpha)],
        "cons_d": [Stage("cons_d", 2 * E, "logits", cfg.beta)],
        "tgd": [Stage("tgd", 2 * E)],
        "random": [Stage("random", 2 * E, perturbation="random", supervision="train")],
    }
    try:
        return stages[cfg.method]
    except KeyError:
        raise ValueError(
            f"Unknown method {cfg.method!r}; expected one of {', '.join(METHODS)}."
        ) from None


def train_method(graph, cfg, on_epoch=None):
    """Phase 1, self-training labels, then the method's stages."""
    log = RunLog()
    params = train_phase1(graph, cfg, log)
    result = TrainingResult(params=params, log=log, snapshots={"phase1": params})
    stages = method_stages(cfg)
    if not stages:
        return result

    soft = rst_labels(params, graph, cfg.linear_head)
    result.soft_labels = soft
    epoch = cfg.epochs_per_phase
    for stage in stages:
        params = run_stage(params, graph, soft, cfg, stage, log, epoch, on_epoch)
        epoch += stage.epochs
        result.snapshots[stage.phase] = params
    result.params = params
    logger.info("training done method=%s epochs=%d", cfg.method, epoch)
    return result


def train_hcref(graph, cfg, on_epoch=None):
    """Phase 1, then phase 2 with the head frozen, then phase 3 with the
    encoder frozen. `cfg.method == "gcn"` stops after phase 1."""
    if cfg.method not in ("hcref", "gcn"):
        cfg = cfg.derive(method="hcref")
    return train_method(graph, cfg, on_epoch)


def train_variant(graph, cfg, on_epoch=None):
    """Baselines and ablations sharing the phase-1 pre-training."""
    if cfg.method in ("hcref", "gcn"):
        raise ValueError(f"{cfg.method!r} is not a variant; use train_hcref.")
    return train_method(graph, cfg, on_epoch)
