"""
Django command to train one model into a run directory.
"""
from core.management.base import PipelineCommand
from evaluation.harness import series_hook
from train.config import resolve_config
from train.pipeline import train_method
from train.rundir import RunDirectory


class Command(PipelineCommand):
    """Django command to train a model."""

    help = "Train a model and write params, run log and config to --out."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument("--out", required=True, help="Run directory.")

    def run(self, **options):
        cfg = resolve_config(options["config"], self.config_overrides(options))
        run_dir = RunDirectory(options["out"])
        run_dir.write_config(cfg)
        graph = self.load_graph(cfg)

        self.stdout.write(f"Training {cfg.method} seed={cfg.seed}...")
        on_epoch = series_hook(graph, cfg) if cfg.series_every else None
        result = train_method(graph, cfg, on_epoch)
        run_dir.write_result(result)
        self.stdout.write(self.style.SUCCESS(f"Run written to {run_dir.path}"))
