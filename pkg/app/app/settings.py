"""
Django settings for the hcref project.

The project has no database and no HTTP surface; Django provides the app
registry, the management commands and the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.0/ref/settings/
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get("SECRET_KEY", "changeme")

DEBUG = bool(int(os.environ.get("DEBUG", 0)))

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "core",
    "graphio",
    "gradkit",
    "model",
    "attack",
    "train",
    "evaluation",
]

# No models are persisted; every artifact is a plain file under --out.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/4.0/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


# Logging
# https://docs.djangoproject.com/en/4.0/topics/logging/

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "keyvalue": {
            "format": "time=%(asctime)s level=%(levelname)s "
            "logger=%(name)s msg=%(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "keyvalue",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": os.environ.get("HCREF_LOG_LEVEL", "WARNING"),
    },
}


# Numeric kernels and sweeps

SWEEP_WORKERS = int(os.environ.get("HCREF_SWEEP_WORKERS", 1))

# Root of the raw/canonical datasets used by the slow reproduction tests.
DATA_DIR = os.environ.get("HCREF_DATA_DIR", "")


# RunConfig defaults. Config files and command-line flags override these.

HCREF = {
    "method": "hcref",
    "epsilon": 0.05,
    "T_atk": 40,
    "lambda": 1.0,
    "mu0": 200.0,
    "mu0_cw": 0.1,
    "mu_decay_exponent": 2.0,
    "attack_loss": "CE",
    "cw_kappa": 0.0,
    "alpha": 16.0,
    "beta": 32.0,
    "epochs_per_phase": 120,
    "lr": 0.01,
    "weight_decay": 5e-4,
    "hidden": 32,
    "seed": 0,
    "random_del_rate": 0.05,
    "optimizer": "adam",
    "mean_reduce": False,
    "linear_head": False,
    "detach_natural": False,
    "supervise_all": True,
    "normalize_features": True,
    "victim": "train",
    "num_samples": 20,
    "eval_attack_iters": 100,
    "series_every": 0,
    "seeds": [0, 1, 2],
}

# Per-dataset defaults, keyed by the dataset directory name. Applied over
# HCREF and under config files and flags.

HCREF_DATASETS = {
    "cora": {"alpha": 16.0, "beta": 32.0, "epsilon": 0.2},
    "citeseer": {"alpha": 0.05, "beta": 0.05, "epsilon": 0.05},
}
