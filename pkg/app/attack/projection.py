"""
Euclidean projection onto {s in [0, 1]^m : sum(s) <= budget}.
"""
import numpy as np

from core.exceptions import ProjectionError

MAX_ITER = 100


def _excess(a, mu, budget):
    return np.clip(a - mu, 0.0, 1.0).sum() - budget


def project_budget(a, budget, tol=1e-6):
    """Clip to the box, or clip a - mu with mu > 0 found by bisection.

    mu is searched in [0, max(a)]; the sum constraint holds to within `tol`.
    """
    if budget <= 0:
        raise ValueError(f"Budget must be positive, got {budget}.")
    a = np.asarray(a, dtype=np.float64)
    clipped = np.clip(a, 0.0, 1.0)
    if clipped.sum() <= budget + tol:
        return clipped

    low, high = 0.0, float(a.max())
    for _ in range(MAX_ITER):
        mu = 0.5 * (low + high)
        excess = _excess(a, mu, budget)
        if abs(excess) <= tol:
            return np.clip(a - mu, 0.0, 1.0)
        if excess > 0:
            low = mu
        else:
            high = mu
    raise ProjectionError(low, high, _excess(a, 0.5 * (low + high), budget))
