"""
Writers for the JSON and CSV artifacts.
"""
import csv
import json
from pathlib import Path

import numpy as np


def sig6(value):
    """Format a float with 6 significant digits."""
    return f"{float(value):.6g}"


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}.")


def write_json(path, payload):
    """Write JSON with sorted keys; floats keep shortest round-trip form."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, indent=2, sort_keys=True, default=_plain)
    path.write_text(text + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def write_csv(path, fieldnames, rows):
    """Write rows as CSV; float cells are printed with 6 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.DictWriter(
            f,
            fieldnames=fieldnames,
            extrasaction="ignore",
            lineterminator="\n",
        )
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {
                    key: sig6(value) if isinstance(value, float) else value
                    for key, value in row.items()
                }
            )


def read_csv(path):
    """Rows of a CSV written by `write_csv`, as dicts of strings."""
    with Path(path).open(newline="") as f:
        return list(csv.DictReader(f))
