"""
Seeded random streams.

Every consumer draws from its own named substream so that adding a draw in
one place never shifts the numbers seen by another. Streams are numpy PCG64
generators keyed by SeedSequence([seed, crc32(name), *extra]).
"""
import zlib

import numpy as np

ALGORITHM = "numpy.random.PCG64/SeedSequence"

STREAMS = ("init", "attack", "sampling", "baseline")


def substream(seed, name, *extra):
    """Return the generator for stream `name` of run `seed`."""
    if name not in STREAMS:
        raise ValueError(f"Unknown random stream {name!r}.")
    key = [int(seed), zlib.crc32(name.encode("ascii"))]
    key.extend(int(value) for value in extra)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def describe():
    """Metadata recorded with every run."""
    return {"algorithm": ALGORITHM, "numpy": np.__version__}
