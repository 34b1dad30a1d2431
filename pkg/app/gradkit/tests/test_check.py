"""
Tests for the finite-difference gradient check.
"""
from unittest.mock import patch

import numpy as np

from django.test import SimpleTestCase

from evaluation.gradcheck import (
    attack_checks,
    loss_checks,
    primitive_checks,
    random_graph_checks,
    training_checks,
)
from gradkit.check import finite_diff_check
from gradkit.ops import PRIMITIVES
from gradkit.tape import Tape


def assert_all_pass(test, results):
    """Fail with the summary of every failed check."""
    failures = [f"{label}: {r.summary()}" for label, r in results if not r.passed]
    test.assertEqual(failures, [])


class FiniteDiffCheckTests(SimpleTestCase):
    """Test the checker on hand-built tapes."""

    def test_quadratic_passes(self):
        """Test sum(x * x) has the exact gradient 2x."""
        tape = Tape()
        tape.input("x")
        loss = tape.sum(tape.mul("x", "x"))
        x = np.random.default_rng(0).normal(size=(3, 4))

        result = finite_diff_check(tape, {"x": x}, loss, "x")

        self.assertTrue(result.passed)
        self.assertEqual(result.checked, 12)

    def test_relu_kink_excluded(self):
        """Test entries sitting on the relu kink are excluded, not failed."""
        tape = Tape()
        tape.input("x")
        loss = tape.sum(tape.relu("x"))
        x = np.array([[0.0, 1.5, -2.0, 0.0]])

        result = finite_diff_check(tape, {"x": x}, loss, "x")

        self.assertTrue(result.passed)
        self.assertEqual(result.excluded, [(0, 0), (0, 3)])
        self.assertEqual(result.checked, 2)

    def test_nothing_checked_fails(self):
        """Test a check whose every entry sits on a kink does not pass."""
        tape = Tape()
        tape.input("x")
        loss = tape.sum(tape.relu("x"))

        result = finite_diff_check(tape, {"x": np.zeros((1, 3))}, loss, "x")

        self.assertEqual(result.checked, 0)
        self.assertEqual(len(result.excluded), 3)
        self.assertFalse(result.passed)

    def test_wrong_gradient_reported(self):
        """Test a gradient that disagrees is a failing result, not an error."""
        tape = Tape()
        tape.input("x")
        loss = tape.sum(tape.mul("x", "x"))
        forward_fn, _ = PRIMITIVES["mul"]
        half_vjp = (forward_fn, lambda attrs, g, out, a, b, needs: (g * b, 0 * a))

        with patch.dict("gradkit.tape.PRIMITIVES", {"mul": half_vjp}):
            result = finite_diff_check(tape, {"x": np.ones((1, 2))}, loss, "x")

        self.assertFalse(result.passed)
        self.assertIn("FAIL", result.summary())

    def test_sampled_entries(self):
        """Test max_entries limits how many entries are compared."""
        tape = Tape()
        tape.input("x")
        loss = tape.sum(tape.softmax("x"))
        x = np.random.default_rng(1).normal(size=(5, 5))

        result = finite_diff_check(tape, {"x": x}, loss, "x", max_entries=7)

        self.assertEqual(result.checked + len(result.excluded), 7)


class SuiteTests(SimpleTestCase):
    """Test the gradient suite run by the grad-check command."""

    def test_every_primitive(self):
        """Test each primitive's gradient matches central differences."""
        results = primitive_checks()

        labels = {label.split("/")[0] for label, _ in results}
        self.assertIn("scatter_pairs", labels)
        self.assertIn("flip_normalize", labels)
        assert_all_pass(self, results)

    def test_losses_wrt_parameters(self):
        """Test CE, margin and KL gradients for every parameter group."""
        assert_all_pass(self, loss_checks())

    def test_attack_losses_wrt_pairs(self):
        """Test attack gradients through degree normalization."""
        assert_all_pass(self, attack_checks())

    def test_training_objectives(self):
        """Test training losses with both smoothness terms."""
        assert_all_pass(self, training_checks())

    def test_both_heads_covered(self):
        """Test the loss and attack checks run with the relu and the linear head."""
        labels = {label.split("/")[0] for label, _ in loss_checks() + attack_checks()}

        self.assertIn("ce_relu", labels)
        self.assertIn("cw_linear", labels)
        self.assertIn("attack_cw_relu", labels)
        self.assertIn("attack_ce_linear", labels)

    def test_random_graphs(self):
        """Test attack and parameter gradients on 50 graphs of 4 to 10 nodes."""
        results = random_graph_checks()

        graphs = {label.split("_")[0] for label, _ in results}
        self.assertEqual(len(graphs), 50)
        self.assertIn("graph0_cw_relu/s", {label for label, _ in results})
        self.assertIn("graph49_ce_relu/W1", {label for label, _ in results})
        assert_all_pass(self, results)
