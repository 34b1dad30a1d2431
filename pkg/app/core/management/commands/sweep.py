"""
Django command to run a grid of training and attack experiments.
"""
from pathlib import Path

from core.management.base import PipelineCommand
from evaluation.harness import (
    hyperparam_sweep,
    misclassification_grid,
    robustness_sweep,
    write_hyperparam,
)
from train.config import load_grid


class Command(PipelineCommand):
    """Django command to produce robustness tables."""

    help = "Train and attack every cell of --grid and write CSV tables to --out."

    def add_arguments(self, parser):
        parser.add_argument("--grid", required=True, help="Grid JSON file.")
        parser.add_argument("--config", help="Run config JSON underneath the grid.")
        parser.add_argument("--out", required=True, help="Output directory.")
        parser.add_argument("--workers", type=int, help="Process pool size.")

    def run(self, **options):
        cfg, grid = load_grid(options["grid"], options["config"])
        out = Path(options["out"])
        out.mkdir(parents=True, exist_ok=True)
        self.write_config(out, {**cfg.metadata(), "grid": grid}, directory=True)
        graph = self.load_graph(cfg)
        workers = options["workers"]

        self.stdout.write(
            f"Sweeping {len(grid['methods'])} methods x {len(grid['seeds'])} seeds..."
        )
        result = robustness_sweep(
            graph, cfg, grid["methods"], grid["attacks"], grid["epsilons"],
            grid["seeds"], workers,
        )
        result.write(out)

        if "misclassification" in grid:
            section = grid["misclassification"]
            self.stdout.write("Computing misclassification grid...")
            table = misclassification_grid(
                graph, cfg, section["train_eps"], section["attack_eps"], grid["seeds"], workers
            )
            table.write(out / "misclassification.csv")

        if "hyperparam" in grid:
            section = grid["hyperparam"]
            self.stdout.write(f"Sweeping {section['param']}...")
            rows = hyperparam_sweep(
                graph, cfg, section["param"], section["values"], grid["seeds"], workers
            )
            write_hyperparam(out / f"hyperparam_{section['param']}.csv", rows)

        self.stdout.write(self.style.SUCCESS(f"Tables written to {out}"))
