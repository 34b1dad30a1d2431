"""
Primitive operations and their vector-Jacobian products.

Every tensor is a 2-D float64 array. `add`, `sub` and `mul` broadcast a
(1, k) row or (n, 1) column against an (n, k) operand. The left operand of
`matmul` may be a scipy sparse matrix, which is then treated as a constant.
"""
import numpy as np
import scipy.sparse as sp


def _dense(value):
    return np.asarray(value.toarray() if sp.issparse(value) else value)


def _unbroadcast(grad, shape):
    if grad.shape == shape:
        return grad
    axes = tuple(i for i, (g, s) in enumerate(zip(grad.shape, shape)) if s == 1 and g != 1)
    return grad.sum(axis=axes, keepdims=True).reshape(shape)


def softmax_rows(x):
    shifted = x - x.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _log_softmax(x):
    shifted = x - x.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _excluded_argmax(x, cols):
    masked = np.array(x, dtype=np.float64, copy=True)
    masked[np.arange(x.shape[0]), cols] = -np.inf
    # argmax returns the first maximum, i.e. the smallest class index
    return masked.argmax(axis=1)


# forward(attrs, *inputs) -> output


def _matmul(attrs, a, b):
    return np.asarray(a @ b)


def _mul(attrs, a, b):
    return a * b


def _add(attrs, a, b):
    return a + b


def _sub(attrs, a, b):
    return a - b


def _scale(attrs, a):
    return attrs["factor"] * a


def _relu(attrs, a):
    return np.maximum(a, 0.0)


def _maximum(attrs, a):
    return np.maximum(a, attrs["floor"])


def _softmax_op(attrs, a):
    return softmax_rows(a)


def _log_softmax_op(attrs, a):
    return _log_softmax(a)


def _log(attrs, a):
    floor = attrs.get("floor", 0.0)
    return np.log(np.maximum(a, floor) if floor > 0 else a)


def _power(attrs, a):
    return a ** attrs["exponent"]


def _sum(attrs, a):
    axis = attrs.get("axis")
    if axis is None:
        return np.array([[a.sum()]])
    return a.sum(axis=axis, keepdims=True)


def _gather_rows(attrs, a):
    return a[attrs["index"]]


def _pick(attrs, a):
    cols = attrs["cols"]
    return a[np.arange(a.shape[0]), cols][:, None]


def _row_max_excluding(attrs, a):
    cols = attrs["cols"]
    best = _excluded_argmax(a, cols)
    return a[np.arange(a.shape[0]), best][:, None]


def _diag_scale(attrs, v, m):
    if attrs["side"] == "left":
        return v * m
    return m * v.T


def _scatter_pairs(attrs, s):
    n = attrs["n"]
    rows, cols = np.triu_indices(n, k=1)
    out = np.zeros((n, n))
    out[rows, cols] = s[:, 0]
    out[cols, rows] = s[:, 0]
    return out


def flip_normalize_attrs(A):
    """Upper-triangle mask and base pair values of a symmetric 0/1 adjacency."""
    dense = np.asarray(A.toarray() if sp.issparse(A) else A)
    upper = np.triu(np.ones(dense.shape, dtype=bool), k=1)
    return {"upper": upper, "base": dense[upper].astype(np.int8)}


def _flip_normalize(attrs, s):
    # D^-1/2 (A + (1 - 2A) * S + I) D^-1/2 written into a single n x n buffer
    upper, base = attrs["upper"], attrs["base"]
    values = s[:, 0] * (1.0 - 2.0 * base)
    values += base
    out = np.zeros(upper.shape)
    out[upper] = values
    out.T[upper] = values
    np.fill_diagonal(out, 1.0)
    d = out.sum(axis=1) ** -0.5
    out *= d[:, None]
    out *= d[None, :]
    return out


# backward(attrs, grad_out, out, *inputs, needs) -> one gradient per input


def _matmul_vjp(attrs, g, out, a, b, needs):
    ga = _dense(g @ _dense(b).T) if needs[0] else None
    gb = np.asarray(a.T @ g) if needs[1] else None
    return ga, gb


def _mul_vjp(attrs, g, out, a, b, needs):
    return (
        _unbroadcast(g * b, a.shape) if needs[0] else None,
        _unbroadcast(g * a, b.shape) if needs[1] else None,
    )


def _add_vjp(attrs, g, out, a, b, needs):
    return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)


def _sub_vjp(attrs, g, out, a, b, needs):
    return _unbroadcast(g, a.shape), -_unbroadcast(g, b.shape)


def _scale_vjp(attrs, g, out, a, needs):
    return (attrs["factor"] * g,)


def _relu_vjp(attrs, g, out, a, needs):
    return (g * (a > 0),)


def _maximum_vjp(attrs, g, out, a, needs):
    return (g * (a > attrs["floor"]),)


def _softmax_vjp(attrs, g, out, a, needs):
    return (out * (g - (g * out).sum(axis=1, keepdims=True)),)


def _log_softmax_vjp(attrs, g, out, a, needs):
    return (g - np.exp(out) * g.sum(axis=1, keepdims=True),)


def _log_vjp(attrs, g, out, a, needs):
    floor = attrs.get("floor", 0.0)
    grad = np.zeros_like(a)
    live = a > floor if floor > 0 else np.ones(a.shape, dtype=bool)
    grad[live] = g[live] / a[live]
    return (grad,)


def _power_vjp(attrs, g, out, a, needs):
    p = attrs["exponent"]
    return (g * p * a ** (p - 1),)


def _sum_vjp(attrs, g, out, a, needs):
    return (np.broadcast_to(g, a.shape).copy(),)


def _gather_rows_vjp(attrs, g, out, a, needs):
    grad = np.zeros_like(a)
    np.add.at(grad, attrs["index"], g)
    return (grad,)


def _pick_vjp(attrs, g, out, a, needs):
    grad = np.zeros_like(a)
    grad[np.arange(a.shape[0]), attrs["cols"]] = g[:, 0]
    return (grad,)


def _row_max_excluding_vjp(attrs, g, out, a, needs):
    grad = np.zeros_like(a)
    best = _excluded_argmax(a, attrs["cols"])
    grad[np.arange(a.shape[0]), best] = g[:, 0]
    return (grad,)


def _diag_scale_vjp(attrs, g, out, v, m, needs):
    if attrs["side"] == "left":
        gv = (g * m).sum(axis=1, keepdims=True) if needs[0] else None
        gm = v * g if needs[1] else None
    else:
        gv = (g * m).sum(axis=0, keepdims=True).T if needs[0] else None
        gm = g * v.T if needs[1] else None
    return gv, gm


def _scatter_pairs_vjp(attrs, g, out, s, needs):
    rows, cols = np.triu_indices(attrs["n"], k=1)
    return ((g[rows, cols] + g[cols, rows])[:, None],)


def _flip_normalize_vjp(attrs, g, out, s, needs):
    upper, base = attrs["upper"], attrs["base"]
    shape = upper.shape
    # the diagonal of A~ is 1, so out_ii = d_i^2
    d = np.sqrt(np.diagonal(out))
    g_d = (np.einsum("ij,ij->i", g, out) + np.einsum("ji,ji->i", g, out)) / d
    g_deg = -0.5 * g_d * d ** 3

    def by_row(v):
        return np.broadcast_to(v[:, None], shape)[upper]

    def by_col(v):
        return np.broadcast_to(v[None, :], shape)[upper]

    pair = g[upper] + g.T[upper]
    pair *= by_row(d)
    pair *= by_col(d)
    pair += by_row(g_deg)
    pair += by_col(g_deg)
    pair *= 1.0 - 2.0 * base
    return (pair[:, None],)


PRIMITIVES = {
    "matmul": (_matmul, _matmul_vjp),
    "mul": (_mul, _mul_vjp),
    "add": (_add, _add_vjp),
    "sub": (_sub, _sub_vjp),
    "scale": (_scale, _scale_vjp),
    "relu": (_relu, _relu_vjp),
    "maximum": (_maximum, _maximum_vjp),
    "softmax": (_softmax_op, _softmax_vjp),
    "log_softmax": (_log_softmax_op, _log_softmax_vjp),
    "log": (_log, _log_vjp),
    "power": (_power, _power_vjp),
    "sum": (_sum, _sum_vjp),
    "gather_rows": (_gather_rows, _gather_rows_vjp),
    "pick": (_pick, _pick_vjp),
    "row_max_excluding": (_row_max_excluding, _row_max_excluding_vjp),
    "diag_scale": (_diag_scale, _diag_scale_vjp),
    "scatter_pairs": (_scatter_pairs, _scatter_pairs_vjp),
    "flip_normalize": (_flip_normalize, _flip_normalize_vjp),
}

# Ops whose derivative jumps somewhere; the finite-difference check skips
# entries whose shifted evaluation crosses one of these points.
KINKED = ("relu", "maximum", "row_max_excluding", "log")


def kink_signature(op, attrs, a):
    """Discrete state of a kinked op at input `a`."""
    if op == "relu":
        return a > 0
    if op == "maximum":
        return a > attrs["floor"]
    if op == "row_max_excluding":
        return _excluded_argmax(a, attrs["cols"])
    floor = attrs.get("floor", 0.0)
    return a > floor if floor > 0 else None
