"""
Run directories: everything needed to reload or regenerate a training run.

    config.json           resolved RunConfig, code version, RNG algorithm
    params.json           final parameters
    params_<phase>.json   parameters at the end of each phase
    run_log.csv           one row per epoch
"""
from pathlib import Path

from core.reports import read_csv, write_csv
from model.params import load_params, save_params
from train.config import load_config, save_config

RUN_LOG_FIELDS = ["epoch", "phase", "L_CE", "R_adv", "attack_loss", "acc_under_attack"]


class RunLog:
    """Per-epoch training record."""

    def __init__(self):
        self.rows = []

    def __len__(self):
        return len(self.rows)

    def record(self, epoch, phase, ce, reg=0.0, attack_loss=None, accuracy=None):
        self.rows.append(
            {
                "epoch": epoch,
                "phase": phase,
                "L_CE": float(ce),
                "R_adv": float(reg),
                "attack_loss": "" if attack_loss is None else float(attack_loss),
                "acc_under_attack": "" if accuracy is None else float(accuracy),
            }
        )

    def column(self, name, phase=None):
        return [
            row[name] for row in self.rows if phase is None or row["phase"] == phase
        ]

    def write(self, path):
        write_csv(path, RUN_LOG_FIELDS, self.rows)


class RunDirectory:
    """Reader and writer for one run's artifacts."""

    def __init__(self, path):
        self.path = Path(path)

    @property
    def config_path(self):
        return self.path / "config.json"

    @property
    def params_path(self):
        return self.path / "params.json"

    @property
    def log_path(self):
        return self.path / "run_log.csv"

    def phase_params_path(self, phase):
        return self.path / f"params_{phase}.json"

    def write_config(self, cfg):
        self.path.mkdir(parents=True, exist_ok=True)
        save_config(cfg, self.config_path)

    def write_result(self, result):
        """Persist final and per-phase parameters plus the run log."""
        for phase, params in result.snapshots.items():
            save_params(params, self.phase_params_path(phase))
        save_params(result.params, self.params_path)
        result.log.write(self.log_path)

    def read_config(self):
        if not self.config_path.exists():
            raise FileNotFoundError(str(self.config_path))
        return load_config(self.config_path)

    def read_params(self, phase=None):
        path = self.params_path if phase is None else self.phase_params_path(phase)
        if not path.exists():
            raise FileNotFoundError(str(path))
        return load_params(path)

    def read_series(self):
        """Accuracy under attack per logged epoch, or None when none was recorded."""
        if not self.log_path.exists():
            return None
        series = [
            {"epoch": int(row["epoch"]), "accuracy": float(row["acc_under_attack"])}
            for row in read_csv(self.log_path)
            if row["acc_under_attack"]
        ]
        return series or None
