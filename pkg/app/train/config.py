"""
Resolved run configuration.

Values come from settings.HCREF, then settings.HCREF_DATASETS for the named
dataset, then the config file, then command-line overrides. The merged
document is validated by RunConfigSerializer.
"""
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from django.conf import settings

import core
from attack.pgd import AttackSettings
from core import rng
from core.exceptions import ConfigError
from core.reports import read_json, write_json
from train.serializers import GridSerializer, RunConfigSerializer


@dataclass(frozen=True)
class RunConfig:
    """Every hyperparameter of training and attack for one run."""

    dataset: str
    method: str = "hcref"
    epsilon: float = 0.05
    T_atk: int = 40
    lam: float = 1.0
    mu0: float = 200.0
    mu_decay_exponent: float = 2.0
    attack_loss: str = "CE"
    cw_kappa: float = 0.0
    alpha: float = 16.0
    beta: float = 32.0
    epochs_per_phase: int = 120
    lr: float = 0.01
    weight_decay: float = 5e-4
    hidden: int = 32
    seed: int = 0
    random_del_rate: float = 0.05
    optimizer: str = "adam"
    mean_reduce: bool = False
    linear_head: bool = False
    detach_natural: bool = False
    supervise_all: bool = True
    normalize_features: bool = True
    victim: str = "train"
    num_samples: int = 20
    eval_attack_iters: int = 100
    series_every: int = 0
    seeds: tuple = field(default=(0, 1, 2))

    def attack_settings(self, iters=None, loss_kind=None, epsilon=None, mu0=None):
        """Attack hyperparameters; evaluation passes its own iteration count."""
        loss_kind = loss_kind or self.attack_loss
        if mu0 is None:
            mu0 = self.mu0 if loss_kind == self.attack_loss else default_mu0(loss_kind)
        return AttackSettings(
            loss_kind=loss_kind,
            epsilon=self.epsilon if epsilon is None else epsilon,
            T_atk=self.T_atk if iters is None else iters,
            lam=self.lam,
            mu0=mu0,
            mu_decay_exponent=self.mu_decay_exponent,
            kappa=self.cw_kappa,
            num_samples=self.num_samples,
            linear_head=self.linear_head,
        )

    def derive(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        data = asdict(self)
        data["lambda"] = data.pop("lam")
        data["seeds"] = list(self.seeds)
        return data

    def metadata(self):
        """Resolved config plus what is needed to regenerate the run."""
        return {
            "config": self.to_dict(),
            "code_version": core.__version__,
            "rng": rng.describe(),
        }


def default_mu0(loss_kind):
    defaults = settings.HCREF
    return defaults["mu0_cw"] if loss_kind == "CW" else defaults["mu0"]


def dataset_defaults(dataset):
    """Per-dataset overrides of settings.HCREF, keyed by the dataset's directory name."""
    if not dataset:
        return {}
    return dict(settings.HCREF_DATASETS.get(Path(str(dataset)).name.lower(), {}))


def resolve_config(path=None, overrides=None, base=None):
    """Merge defaults, dataset defaults, an optional file and overrides into a
    RunConfig."""
    layers = [dict(base or {})]
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(str(path))
        layers.append(read_json(path))
    layers.append({k: v for k, v in (overrides or {}).items() if v is not None})

    dataset = next(
        (layer["dataset"] for layer in reversed(layers) if layer.get("dataset")), None
    )
    merged = {
        key: value
        for key, value in settings.HCREF.items()
        if key not in ("mu0", "mu0_cw")
    }
    merged.update(dataset_defaults(dataset))
    for layer in layers:
        merged.update(layer)
    if merged.get("mu0") is None:
        merged["mu0"] = default_mu0(merged.get("attack_loss", "CE"))

    serializer = RunConfigSerializer(data=merged)
    if not serializer.is_valid():
        raise ConfigError(str(serializer.errors))
    data = dict(serializer.validated_data)
    data["lam"] = data.pop("lambda")
    data["seeds"] = tuple(data["seeds"])
    data.pop("dropout", None)
    return RunConfig(**data)


def config_from_dict(data):
    """Rebuild a RunConfig from a persisted `to_dict` document."""
    return resolve_config(base=data)


def save_config(cfg, path):
    write_json(path, cfg.metadata())


def load_config(path):
    document = read_json(path)
    return config_from_dict(document.get("config", document))


def load_grid(path, config_path=None):
    """Validated sweep grid plus the RunConfig its cells start from."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    serializer = GridSerializer(data=read_json(path))
    if not serializer.is_valid():
        raise ConfigError(f"{path}: {serializer.errors}")
    grid = dict(serializer.validated_data)
    cfg = resolve_config(config_path, grid.pop("config"))
    if grid.get("seeds") is None:
        grid["seeds"] = list(cfg.seeds)
    return cfg, grid
