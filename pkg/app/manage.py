#!/usr/bin/env python
"""Command-line utility for the hcref experiments."""
import os
import sys

THREAD_VARIABLES = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
)


def _pin_threads():
    """Apply HCREF_NUM_THREADS to the BLAS pools before numpy loads."""
    threads = os.environ.get("HCREF_NUM_THREADS", "1")
    for name in THREAD_VARIABLES:
        os.environ.setdefault(name, threads)


def main(argv=None):
    """Run a subcommand; hyphenated names map to their module names."""
    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1 and not argv[1].startswith("-"):
        argv[1] = argv[1].replace("-", "_")

    _pin_threads()
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "app.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
