"""
Training losses as tapes: supervised CE on the (possibly perturbed) graph
plus an optional KL smoothness term between adversarial and natural views.
"""
from typing import NamedTuple

import numpy as np

from core.exceptions import NonFiniteError
from gradkit.tape import Tape, forward, grad
from model.losses import add_ce, add_kl
from model.network import add_network, declare_params, forward as network_forward

REGULARIZERS = (None, "hidden", "logits")


class StepResult(NamedTuple):
    loss: float
    ce: float
    reg: float
    grads: dict


class TrainingObjective:
    """L = CE(f(A_adv, X), labels) + weight * KL(view(A_adv) || view(A_nat)).

    `regularizer` picks the view: "hidden" compares encoder outputs H,
    "logits" compares head outputs Z, None drops the term. With
    `detach_natural` the natural view is fed in as a constant.
    """

    def __init__(
        self, graph, dims, labels, node_set, regularizer=None, weight=0.0,
        linear_head=False, mean_reduce=False, detach_natural=False,
    ):
        if regularizer not in REGULARIZERS:
            raise ValueError(f"Unknown regularizer {regularizer!r}.")
        if not weight:
            regularizer = None
        self.graph = graph
        self.regularizer = regularizer
        self.linear_head = linear_head
        self.detach_natural = detach_natural
        n = graph.n

        tape = Tape()
        declare_params(tape, dims)
        tape.input("A_adv", (n, n))
        tape.input("X", (n, graph.d))
        H_adv, Z_adv = add_network(tape, "A_adv", "X", linear_head, prefix="adv_")
        self.ce = add_ce(tape, Z_adv, labels, node_set, mean=mean_reduce)
        self.reg = None
        total = self.ce
        if regularizer is not None:
            adv_view = H_adv if regularizer == "hidden" else Z_adv
            if detach_natural:
                nat_view = tape.input("nat_view", (n, None))
            else:
                tape.input("A_nat", (n, n))
                H_nat, Z_nat = add_network(tape, "A_nat", "X", linear_head, prefix="nat_")
                nat_view = H_nat if regularizer == "hidden" else Z_nat
            self.reg = add_kl(tape, adv_view, nat_view)
            total = tape.add(self.ce, tape.scale(self.reg, weight), name="total")
        self.total = total
        self.tape = tape

    def tape_inputs(self, params, adj_adv, adj_nat=None):
        inputs = {"A_adv": adj_adv, "X": self.graph.X, **params.arrays()}
        if self.regularizer is None:
            return inputs
        if self.detach_natural:
            natural = network_forward(params, adj_nat, self.graph.X, self.linear_head)
            inputs["nat_view"] = natural.H if self.regularizer == "hidden" else natural.Z
        else:
            inputs["A_nat"] = adj_nat
        return inputs

    def step(self, params, adj_adv, adj_nat=None):
        """Loss parts and gradients for the trainable groups of `params`."""
        inputs = self.tape_inputs(params, adj_adv, adj_nat)
        values = forward(self.tape, inputs)
        grads = grad(self.tape, inputs, self.total, params.trainable(), values=values)
        reg = float(values[self.reg][0, 0]) if self.reg else 0.0
        result = StepResult(
            loss=float(values[self.total][0, 0]),
            ce=float(values[self.ce][0, 0]),
            reg=reg,
            grads=grads,
        )
        if not all(np.all(np.isfinite(g)) for g in grads.values()):
            raise NonFiniteError("gradient")
        return result

    def loss(self, params, adj_adv, adj_nat=None):
        values = forward(self.tape, self.tape_inputs(params, adj_adv, adj_nat))
        return float(values[self.total][0, 0])
