"""
Shared behaviour of the pipeline's management commands.
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

import core
from core import rng
from core.exceptions import HCRefError, MissingFileError
from core.reports import write_json
from graphio.datasets import load_graph

# Exit codes: 1 for pipeline failures, 2 for usage and missing inputs.
FAILURE = 1
USAGE = 2


class PipelineCommand(BaseCommand):
    """Runs `run(**options)` and turns domain errors into exit codes."""

    def run(self, **options):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except CommandError:
            raise
        except (FileNotFoundError, MissingFileError) as exc:
            raise CommandError(f"missing file: {exc}", returncode=USAGE) from exc
        except HCRefError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=FAILURE) from exc
        except ValueError as exc:
            raise CommandError(f"ValueError: {exc}", returncode=FAILURE) from exc

    def write_config(self, out, document, directory=False):
        """Persist the resolved invocation before any work starts.

        File outputs get `<stem>_config.json` beside them; directory outputs
        get `config.json` inside.
        """
        out = Path(out)
        path = out / "config.json" if directory else out.with_name(f"{out.stem}_config.json")
        document.setdefault("code_version", core.__version__)
        document.setdefault("rng", rng.describe())
        write_json(path, document)
        return path

    def load_graph(self, cfg):
        self.stdout.write(f"Loading dataset {cfg.dataset}...")
        return load_graph(cfg.dataset, normalize=cfg.normalize_features)

    def add_config_arguments(self, parser):
        """Config file plus per-field override flags."""
        parser.add_argument("--config", help="Run config JSON file.")
        parser.add_argument("--dataset", help="Canonical dataset directory.")
        parser.add_argument("--method")
        parser.add_argument("--epsilon", type=float)
        parser.add_argument("--attack-loss", choices=["CE", "CW"])
        parser.add_argument("--alpha", type=float)
        parser.add_argument("--beta", type=float)
        parser.add_argument("--epochs-per-phase", type=int)
        parser.add_argument("--T-atk", dest="T_atk", type=int)
        parser.add_argument("--lr", type=float)
        parser.add_argument("--hidden", type=int)
        parser.add_argument("--seed", type=int)
        parser.add_argument(
            "--series-every", type=int,
            help="Log accuracy under attack every N adversarial epochs.",
        )

    def config_overrides(self, options):
        names = (
            "dataset", "method", "epsilon", "attack_loss", "alpha", "beta",
            "epochs_per_phase", "T_atk", "lr", "hidden", "seed", "series_every",
        )
        return {name: options.get(name) for name in names}
