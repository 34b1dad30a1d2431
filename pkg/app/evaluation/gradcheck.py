"""
Finite-difference suite over every primitive, every loss and the attack
and training objectives, with both the linear and the relu head, run on
small synthetic graphs including 50 seeded graphs of 4 to 10 nodes.
"""
import numpy as np

from attack.pgd import AttackProblem
from gradkit.check import finite_diff_check
from gradkit.ops import PRIMITIVES, flip_normalize_attrs
from gradkit.tape import Tape
from graphio.graph import normalize_adjacency, num_pairs
from graphio.synthetic import block_graph, six_node_graph
from model.losses import add_ce, add_cw, add_kl
from model.network import add_network, declare_params
from model.params import GROUPS, init_params
from train.objective import TrainingObjective

HEADS = (True, False)
RANDOM_GRAPHS = 50


def _primitive_cases(generator):
    """(label, op, attrs, {input: value}) for each primitive."""
    a = generator.normal(size=(3, 4))
    b = generator.normal(size=(3, 4))
    positive = generator.uniform(0.5, 2.0, size=(3, 4))
    # keep entries away from the relu and clamp kinks
    a[np.abs(a) < 0.05] += 0.2
    cols = np.array([1, 0, 3])
    return [
        ("matmul", "matmul", {}, {"a": a, "b": generator.normal(size=(4, 2))}),
        ("mul", "mul", {}, {"a": a, "b": b}),
        ("add", "add", {}, {"a": a, "b": b[:1]}),
        ("sub", "sub", {}, {"a": a, "b": b}),
        ("scale", "scale", {"factor": -1.5}, {"a": a}),
        ("relu", "relu", {}, {"a": a}),
        ("maximum", "maximum", {"floor": 0.1}, {"a": a}),
        ("softmax", "softmax", {}, {"a": a}),
        ("log_softmax", "log_softmax", {}, {"a": a}),
        ("log", "log", {"floor": 1e-12}, {"a": positive}),
        ("power", "power", {"exponent": -0.5}, {"a": positive}),
        ("sum", "sum", {"axis": 1}, {"a": a}),
        ("gather_rows", "gather_rows", {"index": np.array([0, 2, 2])}, {"a": a}),
        ("pick", "pick", {"cols": cols}, {"a": a}),
        ("row_max_excluding", "row_max_excluding", {"cols": cols}, {"a": a}),
        ("diag_scale_left", "diag_scale", {"side": "left"},
         {"v": positive[:, :1], "m": a}),
        ("diag_scale_right", "diag_scale", {"side": "right"},
         {"v": positive[0][:, None], "m": a}),
        ("scatter_pairs", "scatter_pairs", {"n": 4},
         {"s": generator.uniform(size=(num_pairs(4), 1))}),
        ("flip_normalize", "flip_normalize", flip_normalize_attrs(six_node_graph().A),
         {"s": generator.uniform(size=(num_pairs(6), 1))}),
    ]


def primitive_checks(seed=0):
    """Each primitive followed by a fixed random weighting and a sum."""
    generator = np.random.default_rng(seed)
    results = []
    for label, op, attrs, values in _primitive_cases(generator):
        out = PRIMITIVES[op][0](attrs, *values.values())
        tape = Tape()
        for name in values:
            tape.input(name)
        tape.input("R")
        node = tape.apply(op, *values, **attrs)
        loss = tape.sum(tape.mul(node, "R"))
        inputs = {**values, "R": generator.normal(size=out.shape)}
        for name in values:
            results.append((f"{label}/{name}", finite_diff_check(tape, inputs, loss, name)))
    return results


def _loss_tapes(graph, params, linear_head):
    """Tapes for CE, CW margin and KL over the network parameters."""
    n = graph.n
    adj = normalize_adjacency(graph.A)
    perturbed = normalize_adjacency(graph.A.toarray() + _flip_one(graph.A))
    base = {"A": adj, "A2": perturbed, "X": graph.X, **params.arrays()}

    tapes = []
    for kind in ("ce", "cw", "kl"):
        tape = Tape()
        declare_params(tape, params.dims)
        tape.input("A", (n, n))
        tape.input("A2", (n, n))
        tape.input("X", (n, graph.d))
        _, logits = add_network(tape, "A", "X", linear_head=linear_head)
        if kind == "ce":
            loss = add_ce(tape, logits, graph.y, np.arange(n))
        elif kind == "cw":
            loss = add_cw(tape, logits, graph.y, np.arange(n), kappa=10.0)
        else:
            _, other = add_network(tape, "A2", "X", linear_head=linear_head, prefix="p_")
            loss = add_kl(tape, other, logits)
        tapes.append((kind, tape, loss))
    return base, tapes


def _flip_one(A):
    """Dense matrix that removes the first edge of A."""
    dense = np.zeros(A.shape)
    row, col = A.nonzero()
    dense[row[0], col[0]] = dense[col[0], row[0]] = -1.0
    return dense


def _head(linear_head):
    return "linear" if linear_head else "relu"


def loss_checks(seed=0):
    graph = six_node_graph()
    params = init_params(seed, graph.d, 4, graph.C)
    results = []
    for linear_head in HEADS:
        inputs, tapes = _loss_tapes(graph, params, linear_head)
        for kind, tape, loss in tapes:
            for name in GROUPS:
                result = finite_diff_check(tape, inputs, loss, name)
                results.append((f"{kind}_{_head(linear_head)}/{name}", result))
    return results


def _attack_problem_checks(graph, params, s, label, wrt=("s",)):
    results = []
    for linear_head in HEADS:
        for loss_kind in ("CE", "CW"):
            problem = AttackProblem(
                params, graph, loss_kind, graph.train, graph.y, kappa=10.0,
                linear_head=linear_head,
            )
            inputs = problem.tape_inputs(s)
            for name in wrt:
                result = finite_diff_check(problem.tape, inputs, problem.loss, name)
                tag = f"{label}_{loss_kind.lower()}_{_head(linear_head)}/{name}"
                results.append((tag, result))
    return results


def attack_checks(seed=0):
    """Attack losses with respect to the relaxed pair vector."""
    graph = block_graph(n=10, d=6, seed=seed)
    params = init_params(seed, graph.d, 4, graph.C)
    s = np.random.default_rng(seed).uniform(0.0, 0.5, size=num_pairs(graph.n))
    return _attack_problem_checks(graph, params, s, "attack")


def random_graph_checks(seed=0, count=RANDOM_GRAPHS):
    """Attack and parameter gradients on `count` seeded graphs of 4 to 10 nodes."""
    generator = np.random.default_rng(seed)
    results = []
    for index in range(count):
        n = int(generator.integers(4, 11))
        d = int(generator.integers(3, 7))
        graph = block_graph(n=n, d=d, seed=int(generator.integers(2**31)))
        params = init_params(int(generator.integers(2**31)), d, 4, graph.C)
        s = generator.uniform(0.0, 1.0, size=num_pairs(n))
        results.extend(
            _attack_problem_checks(graph, params, s, f"graph{index}", ("s",) + GROUPS)
        )
    return results


def training_checks(seed=0):
    """Training objectives with both smoothness terms."""
    graph = six_node_graph()
    params = init_params(seed, graph.d, 4, graph.C)
    adj_nat = normalize_adjacency(graph.A)
    adj_adv = normalize_adjacency(graph.A.toarray() + _flip_one(graph.A))
    results = []
    for linear_head in HEADS:
        for regularizer in ("hidden", "logits"):
            objective = TrainingObjective(
                graph, params.dims, graph.y, np.arange(graph.n), regularizer, 2.0,
                linear_head=linear_head,
            )
            inputs = objective.tape_inputs(params, adj_adv, adj_nat)
            for name in GROUPS:
                result = finite_diff_check(objective.tape, inputs, objective.total, name)
                results.append((f"train_{regularizer}_{_head(linear_head)}/{name}", result))
    return results


def run_suite(seed=0):
    """All checks as (label, FiniteDiffResult) pairs."""
    return (
        primitive_checks(seed)
        + loss_checks(seed)
        + attack_checks(seed)
        + random_graph_checks(seed)
        + training_checks(seed)
    )
