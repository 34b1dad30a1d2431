"""
Django command to record per-epoch accuracy under attack for ablations.
"""
from pathlib import Path

from core.management.base import PipelineCommand
from evaluation.harness import ABLATION_METHODS, ablation_series
from train.config import resolve_config

# Ablation defaults, applied beneath the config file and flags.
ABLATION_BASE = {"epsilon": 0.2, "alpha": 0.05, "beta": 0.05, "series_every": 1}


class Command(PipelineCommand):
    """Django command to write an ablation series CSV."""

    help = "Accuracy under attack after every adversarial epoch, per method."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument(
            "--methods", default=",".join(ABLATION_METHODS),
            help="Comma-separated methods.",
        )
        parser.add_argument("--workers", type=int)
        parser.add_argument("--out", required=True, help="series.csv path.")

    def run(self, **options):
        cfg = resolve_config(
            options["config"], self.config_overrides(options), base=ABLATION_BASE
        )
        out = Path(options["out"])
        methods = [m for m in options["methods"].split(",") if m]
        self.write_config(out, {**cfg.metadata(), "methods": methods})
        graph = self.load_graph(cfg)

        self.stdout.write(f"Recording series for {', '.join(methods)}...")
        result = ablation_series(graph, cfg, methods, options["workers"])
        result.write(out)
        for method, tail in result.tails.items():
            self.stdout.write(f"{method}: tail_mean={tail:.6g}")
        self.stdout.write(self.style.SUCCESS(f"Series written to {out}"))
