"""
Experiment harness: robustness tables, the misclassification grid, ablation
series and hyperparameter sweeps.

Each cell trains its own model, so cells run as independent jobs in a
process pool sized by settings.SWEEP_WORKERS. Results are assembled in the
parent in job order, which keeps reports independent of the pool size.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from core import rng
from core.reports import write_csv
from evaluation.attacks import LABELS, attack_graph, attack_name, epsilon_key
from evaluation.metrics import evaluate, misclassification_rate
from train.config import default_mu0
from train.pipeline import train_method

logger = logging.getLogger(__name__)

SWEEP_FIELDS = ["method", "attack", "epsilon", "seed", "accuracy"]
SUMMARY_FIELDS = ["method", "attack", "epsilon", "mean", "std", "seeds"]
SERIES_FIELDS = ["method", "epoch", "accuracy"]
TAIL_FIELDS = ["method", "tail_mean"]
HYPERPARAM_FIELDS = ["param", "value", "alpha", "beta", "seed", "accuracy"]

ABLATION_METHODS = ("hcref", "hc1", "hc2", "cons_h", "cons_d", "hc_uncon", "gcn")
SWEPT_PARAMS = {"alpha": "beta", "beta": "alpha"}
HELD_VALUE = 0.05


def run_jobs(fn, jobs, workers=None):
    """Apply `fn` to each argument tuple, in a process pool when workers > 1."""
    workers = settings.SWEEP_WORKERS if workers is None else workers
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def attacked_accuracy(params, graph, cfg, *stream_key):
    """Accuracy on the test nodes under the configured attack at cfg.epsilon."""
    generator = rng.substream(cfg.seed, "attack", epsilon_key(cfg.epsilon), *stream_key)
    flips = attack_graph(
        params, graph, attack_name(cfg.attack_loss), cfg.epsilon, cfg, generator
    )
    return evaluate(params, graph, flips=flips, linear_head=cfg.linear_head)


def summarize(rows, keys=("method", "attack", "epsilon")):
    """Mean and population std of `accuracy` grouped by `keys`."""
    groups = {}
    for row in rows:
        groups.setdefault(tuple(row[k] for k in keys), []).append(row["accuracy"])
    summary = []
    for group, values in groups.items():
        entry = dict(zip(keys, group))
        entry.update(
            mean=float(np.mean(values)),
            std=float(np.std(values)),
            seeds=len(values),
        )
        summary.append(entry)
    return summary


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)
    summary: list = field(default_factory=list)

    def write(self, out_dir, name="robustness"):
        write_csv(out_dir / f"{name}.csv", SWEEP_FIELDS, self.rows)
        write_csv(out_dir / f"{name}_summary.csv", SUMMARY_FIELDS, self.summary)


def _robustness_job(graph, cfg, method, loss_kind, epsilon, seed):
    mu0 = cfg.mu0 if loss_kind == cfg.attack_loss else default_mu0(loss_kind)
    run_cfg = cfg.derive(
        method=method, seed=seed, epsilon=epsilon, attack_loss=loss_kind, mu0=mu0
    )
    params = train_method(graph, run_cfg).params
    name = attack_name(loss_kind)
    flips = attack_graph(params, graph, name, epsilon, run_cfg)
    logger.info(
        "robustness cell done method=%s attack=%s epsilon=%s seed=%d",
        method, loss_kind, epsilon, seed,
    )
    return {
        "method": method,
        "attack": LABELS[name],
        "epsilon": float(epsilon),
        "seed": seed,
        "accuracy": evaluate(params, graph, flips=flips, linear_head=run_cfg.linear_head),
    }


def robustness_sweep(
    graph, cfg, methods, attacks=("CE", "CW"), epsilons=(0.05, 0.1, 0.15, 0.2),
    seeds=None, workers=None,
):
    """Accuracy of each method under each attack and rate, per seed.

    Every (method, attack, epsilon, seed) cell trains against its own attack
    loss and rate, then is attacked the same way.
    """
    seeds = list(cfg.seeds if seeds is None else seeds)
    jobs = [
        (graph, cfg, method, loss_kind, epsilon, seed)
        for method in methods
        for loss_kind in attacks
        for epsilon in epsilons
        for seed in seeds
    ]
    rows = run_jobs(_robustness_job, jobs, workers)
    return SweepResult(rows=rows, summary=summarize(rows))


@dataclass
class MisclassGrid:
    """Misclassification percentages, rows by attack epsilon, columns by
    training epsilon, plus the per-column average."""

    train_eps: list
    attack_eps: list
    matrix: list
    averages: list

    def header(self):
        return ["attack_epsilon"] + [f"train_{e:g}" for e in self.train_eps]

    def rows(self):
        header = self.header()
        rows = [
            dict(zip(header, [f"{a:g}"] + list(values)))
            for a, values in zip(self.attack_eps, self.matrix)
        ]
        rows.append(dict(zip(header, ["average"] + list(self.averages))))
        return rows

    def write(self, path):
        write_csv(path, self.header(), self.rows())

    def to_dict(self):
        return {
            "train_eps": list(self.train_eps),
            "attack_eps": list(self.attack_eps),
            "matrix": self.matrix,
            "averages": self.averages,
        }


def _grid_job(graph, cfg, train_epsilon, seed, attack_eps):
    if train_epsilon == 0:
        run_cfg = cfg.derive(method="gcn", seed=seed)
    else:
        run_cfg = cfg.derive(epsilon=train_epsilon, seed=seed)
    params = train_method(graph, run_cfg).params
    rates = []
    for epsilon in attack_eps:
        flips = attack_graph(params, graph, "ce-pgd", epsilon, run_cfg)
        rate = misclassification_rate(
            params, graph, flips=flips, linear_head=run_cfg.linear_head
        )
        rates.append(100.0 * rate)
    return rates


def misclassification_grid(graph, cfg, train_eps, attack_eps, seeds=None, workers=None):
    """Train at each training epsilon (0 means undefended) and attack each
    model with CE-PGD at every attack epsilon."""
    seeds = list(cfg.seeds if seeds is None else seeds)
    jobs = [
        (graph, cfg, train_epsilon, seed, tuple(attack_eps))
        for train_epsilon in train_eps
        for seed in seeds
    ]
    results = iter(run_jobs(_grid_job, jobs, workers))
    columns = []
    for _ in train_eps:
        per_seed = np.array([next(results) for _ in seeds])
        columns.append(per_seed.mean(axis=0))
    matrix = np.array(columns).T if columns else np.zeros((len(attack_eps), 0))
    return MisclassGrid(
        train_eps=list(train_eps),
        attack_eps=list(attack_eps),
        matrix=matrix.tolist(),
        averages=matrix.mean(axis=0).tolist() if len(attack_eps) else [],
    )


@dataclass
class SeriesResult:
    rows: list = field(default_factory=list)
    tails: dict = field(default_factory=dict)

    def write(self, path):
        write_csv(path, SERIES_FIELDS, self.rows)
        tail_rows = [{"method": m, "tail_mean": v} for m, v in self.tails.items()]
        write_csv(path.with_name(f"{path.stem}_tail.csv"), TAIL_FIELDS, tail_rows)


def series_hook(graph, cfg, points=None):
    """`on_epoch` callback measuring accuracy under attack every
    `cfg.series_every` adversarial epochs (every epoch when 0).

    Measured points are appended to `points` as (adversarial epoch, accuracy).
    """
    E = cfg.epochs_per_phase
    every = cfg.series_every or 1

    def on_epoch(phase, epoch, params):
        index = epoch - E
        if index % every:
            return None
        accuracy = attacked_accuracy(params, graph, cfg, epoch)
        if points is not None:
            points.append((index, accuracy))
        return accuracy

    return on_epoch


def _series_job(graph, cfg, method):
    run_cfg = cfg.derive(method=method)
    E = run_cfg.epochs_per_phase
    every = run_cfg.series_every or 1
    points = []
    result = train_method(graph, run_cfg, series_hook(graph, run_cfg, points))
    if not points:
        accuracy = attacked_accuracy(result.params, graph, run_cfg, E)
        points = [(i, accuracy) for i in range(1, 2 * E + 1) if i % every == 0]
    return points


def ablation_series(graph, cfg, methods, workers=None):
    """Test accuracy under attack after every adversarial epoch, and its mean
    over the second half of the adversarial epochs."""
    unknown = sorted(set(methods) - set(ABLATION_METHODS))
    if unknown:
        raise ValueError(f"Methods not supported by the ablation series: {', '.join(unknown)}.")
    E = cfg.epochs_per_phase
    result = SeriesResult()
    jobs = [(graph, cfg, m) for m in methods]
    for method, points in zip(methods, run_jobs(_series_job, jobs, workers)):
        for epoch, accuracy in points:
            result.rows.append({"method": method, "epoch": epoch, "accuracy": accuracy})
        tail = [accuracy for epoch, accuracy in points if epoch > E]
        result.tails[method] = float(np.mean(tail)) if tail else float("nan")
    return result


def _hyperparam_job(graph, cfg, param, value, seed):
    run_cfg = cfg.derive(**{param: value, SWEPT_PARAMS[param]: HELD_VALUE, "seed": seed})
    params = train_method(graph, run_cfg).params
    return {
        "param": param,
        "value": float(value),
        "alpha": run_cfg.alpha,
        "beta": run_cfg.beta,
        "seed": seed,
        "accuracy": attacked_accuracy(params, graph, run_cfg),
    }


def hyperparam_sweep(graph, cfg, param, values, seeds=None, workers=None):
    """Vary alpha or beta with the other held at 0.05."""
    if param not in SWEPT_PARAMS:
        raise ValueError(f"Can only sweep alpha or beta, not {param!r}.")
    seeds = list(cfg.seeds if seeds is None else seeds)
    jobs = [(graph, cfg, param, value, seed) for value in values for seed in seeds]
    return run_jobs(_hyperparam_job, jobs, workers)


def write_hyperparam(path, rows):
    write_csv(path, HYPERPARAM_FIELDS, rows)
