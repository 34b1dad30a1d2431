"""
Finite-difference validation of tape gradients.
"""
from dataclasses import dataclass, field

import numpy as np

from gradkit.ops import KINKED, kink_signature
from gradkit.tape import forward, grad


@dataclass
class FiniteDiffResult:
    """Outcome of one check; failure is reported here, never raised."""

    input: str
    passed: bool
    checked: int
    worst_entry: tuple = None
    worst_error: float = 0.0
    analytic: float = 0.0
    numeric: float = 0.0
    excluded: list = field(default_factory=list)

    def summary(self):
        status = "pass" if self.passed else "FAIL"
        text = (
            f"{status} {self.input}: checked={self.checked} "
            f"excluded={len(self.excluded)} worst_rel={self.worst_error:.3e}"
        )
        if self.worst_entry is not None:
            text += (
                f" at {self.worst_entry} "
                f"(analytic={self.analytic:.6e} numeric={self.numeric:.6e})"
            )
        return text


def _signature(tape, values):
    states = []
    for node in tape.nodes:
        if node.op in KINKED:
            states.append(kink_signature(node.op, node.attrs, values[node.inputs[0]]))
    return states


def _same(left, right):
    return all(
        (a is None and b is None) or np.array_equal(a, b) for a, b in zip(left, right)
    )


def finite_diff_check(
    tape,
    inputs,
    loss,
    input,
    h=1e-5,
    tol_rel=1e-4,
    abs_floor=1e-7,
    max_entries=None,
    seed=0,
):
    """Compare `grad` against central differences entry by entry.

    An entry passes when |analytic - numeric| <= abs_floor or the relative
    error against the larger magnitude is <= tol_rel. Entries whose shifted
    evaluation moves any relu, clamp or max selection to a different branch
    are skipped and listed in `excluded`. A check that ends with no entry compared fails.
    """
    values = forward(tape, inputs)
    analytic = grad(tape, inputs, loss, [input], values=values)[input]
    base_state = _signature(tape, values)

    x = np.asarray(inputs[input], dtype=np.float64)
    entries = list(np.ndindex(*x.shape))
    if max_entries is not None and len(entries) > max_entries:
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(entries), size=max_entries, replace=False)
        entries = [entries[i] for i in sorted(picked)]

    result = FiniteDiffResult(input=input, passed=True, checked=0)
    for entry in entries:
        shifted_values = []
        for step in (h, -h):
            shifted = x.copy()
            shifted[entry] += step
            shifted_values.append(forward(tape, {**inputs, input: shifted}))
        if not all(_same(base_state, _signature(tape, v)) for v in shifted_values):
            result.excluded.append(entry)
            continue

        numeric = (shifted_values[0][loss][0, 0] - shifted_values[1][loss][0, 0]) / (2 * h)
        exact = analytic[entry]
        diff = abs(exact - numeric)
        scale = max(abs(exact), abs(numeric))
        error = 0.0 if diff <= abs_floor else diff / scale
        result.checked += 1
        if error > result.worst_error or result.worst_entry is None:
            result.worst_entry = entry
            result.worst_error = error
            result.analytic = float(exact)
            result.numeric = float(numeric)

    result.passed = result.checked > 0 and result.worst_error <= tol_rel
    return result
