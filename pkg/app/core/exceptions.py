"""
Domain errors shared by every app.
"""


class HCRefError(Exception):
    """Base class for failures raised by the pipeline."""


class ConfigError(HCRefError):
    """A run configuration or grid file failed validation."""


class GraphLoadError(HCRefError):
    """A dataset file is missing or violates a Graph invariant."""

    def __init__(self, path, message):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")


class MissingFileError(GraphLoadError):
    """A required input file does not exist."""

    def __init__(self, path, message="missing file"):
        super().__init__(path, message)


class ShapeError(HCRefError):
    """Operand shapes disagree with a tape declaration."""


class NonFiniteError(HCRefError):
    """A tape node produced NaN or infinity."""

    def __init__(self, node):
        self.node = node
        super().__init__(f"non-finite value at tape node {node!r}")


class ProjectionError(HCRefError):
    """Bisection for the budget projection did not converge."""

    def __init__(self, low, high, excess):
        self.bracket = (low, high)
        super().__init__(
            f"projection bisection stalled in [{low!r}, {high!r}] "
            f"with budget excess {excess!r}"
        )


class DivergenceError(HCRefError):
    """Training produced a non-finite loss."""

    def __init__(self, phase, epoch):
        self.phase = phase
        self.epoch = epoch
        super().__init__(f"loss diverged in {phase} at epoch {epoch}")


class FlipsFormatError(HCRefError):
    """A flips.tsv file contains a malformed line."""


class TapeError(HCRefError):
    """A tape was asked for a node or input it does not define."""
