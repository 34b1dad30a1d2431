"""
Model parameters: two graph-convolution weights plus a linear head.
"""
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from core import rng
from core.exceptions import ConfigError
from core.reports import read_json, write_json
from model.serializers import ParamsSerializer

ENCODER = ("W1", "W2")
HEAD = ("w", "b")
GROUPS = ENCODER + HEAD


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Encoder (W1: d x h, W2: h x h) and head (w: h x C, b: 1 x C) weights."""

    W1: np.ndarray
    W2: np.ndarray
    w: np.ndarray
    b: np.ndarray
    seed: int = 0
    freeze_encoder: bool = False
    freeze_head: bool = False

    @property
    def dims(self):
        return self.W1.shape[0], self.W1.shape[1], self.w.shape[1]

    def arrays(self):
        return {name: getattr(self, name) for name in GROUPS}

    def trainable(self):
        """Names of the parameter arrays an optimizer may update."""
        names = []
        if not self.freeze_encoder:
            names.extend(ENCODER)
        if not self.freeze_head:
            names.extend(HEAD)
        return names

    def frozen(self, encoder=False, head=False):
        return replace(self, freeze_encoder=encoder, freeze_head=head)

    def updated(self, **arrays):
        """Copy with some arrays replaced; frozen groups are refused."""
        for name in arrays:
            if name not in self.trainable():
                raise ValueError(f"Parameter group holding {name!r} is frozen.")
        return replace(self, **arrays)

    def copy(self):
        return replace(self, **{name: arr.copy() for name, arr in self.arrays().items()})


def _glorot(generator, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return generator.uniform(-limit, limit, size=(fan_in, fan_out))


def init_params(seed, d, h, C):
    """Glorot-uniform weights and a zero bias, deterministic in `seed`."""
    if min(d, h, C) < 1:
        raise ValueError(f"Dimensions must be positive, got d={d} h={h} C={C}.")
    generator = rng.substream(seed, "init")
    return ModelParams(
        W1=_glorot(generator, d, h),
        W2=_glorot(generator, h, h),
        w=_glorot(generator, h, C),
        b=np.zeros((1, C)),
        seed=int(seed),
    )


def save_params(params, path):
    d, h, C = params.dims
    write_json(
        path,
        {
            "d": d,
            "h": h,
            "C": C,
            "seed": params.seed,
            "freeze_encoder": params.freeze_encoder,
            "freeze_head": params.freeze_head,
            "W1": params.W1,
            "W2": params.W2,
            "w": params.w,
            "b": params.b.ravel(),
        },
    )
    return Path(path)


def load_params(path):
    serializer = ParamsSerializer(data=read_json(path))
    if not serializer.is_valid():
        raise ConfigError(f"{path}: {serializer.errors}")
    data = serializer.validated_data
    return ModelParams(
        W1=np.asarray(data["W1"], dtype=np.float64).reshape(data["d"], data["h"]),
        W2=np.asarray(data["W2"], dtype=np.float64).reshape(data["h"], data["h"]),
        w=np.asarray(data["w"], dtype=np.float64).reshape(data["h"], data["C"]),
        b=np.asarray(data["b"], dtype=np.float64).reshape(1, data["C"]),
        seed=data["seed"],
        freeze_encoder=data["freeze_encoder"],
        freeze_head=data["freeze_head"],
    )
