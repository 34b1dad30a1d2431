"""
Projected gradient topology attack with Bernoulli rounding.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from attack.perturbation import FlipSet, PerturbVector, edge_budget
from attack.projection import project_budget
from gradkit.tape import Tape, forward, grad
from graphio.graph import num_pairs
from model.losses import add_ce, add_cw
from model.network import add_network, declare_params

logger = logging.getLogger(__name__)

LOSS_KINDS = ("CE", "CW")


@dataclass(frozen=True)
class AttackSettings:
    """Hyperparameters of one PGD attack run."""

    loss_kind: str = "CE"
    epsilon: float = 0.05
    T_atk: int = 40
    lam: float = 1.0
    mu0: float = 200.0
    mu_decay_exponent: float = 2.0
    kappa: float = 0.0
    num_samples: int = 20
    linear_head: bool = False

    def step_size(self, t):
        """lambda * mu0 / (t + 1)^p for iteration t >= 1."""
        return self.lam * self.mu0 / (t + 1) ** self.mu_decay_exponent


class AttackProblem:
    """Attack loss of fixed parameters as a function of the pair vector s.

    The tape runs s -> D^-1/2 (A*(s) + I) D^-1/2 -> network -> loss through
    one fused node, so the gradient includes the dependence of the degrees
    on s and the only n x n value held is the normalized adjacency.
    """

    def __init__(
        self, params, graph, loss_kind, victim_nodes, labels, kappa=0.0, linear_head=False,
    ):
        if loss_kind not in LOSS_KINDS:
            raise ValueError(f"Unknown attack loss {loss_kind!r}.")
        self.params = params
        self.graph = graph
        self.loss_kind = loss_kind
        n = graph.n

        tape = Tape()
        declare_params(tape, params.dims)
        tape.input("s", (num_pairs(n), 1))
        tape.input("X", (n, graph.d))
        A_hat = tape.flip_normalize("s", graph.A, name="A_hat")
        _, logits = add_network(tape, A_hat, "X", linear_head)
        if loss_kind == "CE":
            self.loss = add_ce(tape, logits, labels, victim_nodes)
        else:
            self.loss = add_cw(tape, logits, labels, victim_nodes, kappa)
        self.tape = tape
        self.constants = {"X": graph.X, **params.arrays()}

    def tape_inputs(self, s):
        return {**self.constants, "s": np.asarray(s, dtype=np.float64).reshape(-1, 1)}

    def loss_value(self, s):
        return float(forward(self.tape, self.tape_inputs(s))[self.loss][0, 0])

    def objective(self, s):
        """The value the attacker maximizes: CE, or the negated margin."""
        value = self.loss_value(s)
        return value if self.loss_kind == "CE" else -value

    def evaluate(self, s):
        """(objective, gradient of the raw loss) at s."""
        inputs = self.tape_inputs(s)
        values = forward(self.tape, inputs)
        g = grad(self.tape, inputs, self.loss, ["s"], values=values)["s"][:, 0]
        value = float(values[self.loss][0, 0])
        return (value if self.loss_kind == "CE" else -value), g

    def ascent_direction(self, g):
        return g if self.loss_kind == "CE" else -g


def attack_gradient(
    params, graph, s, loss_kind, victim_nodes, labels, kappa=0.0, linear_head=False,
):
    """Gradient of the attack loss with respect to the pair vector s."""
    problem = AttackProblem(params, graph, loss_kind, victim_nodes, labels, kappa, linear_head)
    values = s.s if isinstance(s, PerturbVector) else s
    return problem.evaluate(values)[1]


def pgd_attack(params, graph, settings, victim_nodes, labels, problem=None):
    """Run T_atk projected steps from s = 0; returns the best iterate seen."""
    budget = edge_budget(settings.epsilon, graph.num_edges)
    result = PerturbVector.zeros(graph.n, budget)
    if settings.T_atk == 0 or budget == 0:
        return result
    if problem is None:
        problem = AttackProblem(
            params, graph, settings.loss_kind, victim_nodes, labels,
            settings.kappa, settings.linear_head,
        )

    s = result.s
    best_value, best_s = None, s
    for t in range(1, settings.T_atk + 1):
        value, g = problem.evaluate(s)
        if best_value is None or value >= best_value:
            best_value, best_s = value, s
        step = settings.step_size(t) * problem.ascent_direction(g)
        s = project_budget(s + step, budget)
    value = problem.objective(s)
    if value >= best_value:
        best_value, best_s = value, s

    logger.debug(
        "pgd %s budget=%d objective=%.6g mass=%.4g",
        settings.loss_kind, budget, best_value, best_s.sum(),
    )
    result.s = best_s
    return result


def sample_flips(s, budget, num_samples, generator, loss_eval):
    """Best of `num_samples` Bernoulli(s) draws within budget, by loss_eval.

    Falls back to the top-`budget` entries of s when every draw overspends.
    """
    values, n = s.s, s.n
    best, best_value = None, None
    for _ in range(num_samples):
        mask = generator.random(values.size) < values
        if mask.sum() > budget:
            continue
        value = loss_eval(mask.astype(np.float64))
        if best is None or value > best_value:
            best, best_value = mask, value
    if best is None:
        top = np.argsort(-values, kind="stable")[: int(budget)]
        top = top[values[top] > 0]
        best = np.zeros(values.size, dtype=bool)
        best[top] = True
    return FlipSet.from_mask(best, n)


class AttackOutcome(NamedTuple):
    flips: FlipSet
    relaxed: PerturbVector
    objective: float


def attack_objective(
    params, graph, flips, loss_kind, victim_nodes, labels, kappa=0.0, linear_head=False,
):
    """Attacker's objective (CE, or the negated margin) after applying `flips`."""
    problem = AttackProblem(params, graph, loss_kind, victim_nodes, labels, kappa, linear_head)
    return problem.objective(flips.mask().astype(np.float64))


def generate_flips(params, graph, settings, victim_nodes, labels, generator):
    """PGD followed by Bernoulli rounding against the same objective."""
    problem = AttackProblem(
        params, graph, settings.loss_kind, victim_nodes, labels,
        settings.kappa, settings.linear_head,
    )
    relaxed = pgd_attack(params, graph, settings, victim_nodes, labels, problem)
    if relaxed.budget == 0 or not relaxed.s.any():
        flips = FlipSet.empty(graph.n)
    else:
        flips = sample_flips(
            relaxed, relaxed.budget, settings.num_samples, generator, problem.objective
        )
    value = problem.objective(flips.mask().astype(np.float64))
    return AttackOutcome(flips=flips, relaxed=relaxed, objective=value)
