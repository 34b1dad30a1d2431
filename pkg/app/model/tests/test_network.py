"""
Tests for parameters and the forward pass.
"""
import json
import tempfile
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from django.test import SimpleTestCase

from core.exceptions import ConfigError
from graphio.graph import normalize_adjacency
from graphio.synthetic import six_node_graph
from model.network import forward
from model.params import init_params, load_params, save_params


class InitParamsTests(SimpleTestCase):
    """Test parameter initialization."""

    def test_same_seed_identical(self):
        """Test initialization is deterministic in the seed."""
        first = init_params(7, 5, 4, 3)
        second = init_params(7, 5, 4, 3)

        for name, value in first.arrays().items():
            self.assertTrue(np.array_equal(value, getattr(second, name)), name)

    def test_different_seed_differs(self):
        """Test two seeds give different encoder weights."""
        self.assertFalse(
            np.array_equal(init_params(0, 5, 4, 3).W1, init_params(1, 5, 4, 3).W1)
        )

    def test_cora_shapes(self):
        """Test shapes for Cora-sized dimensions."""
        params = init_params(0, 1433, 32, 7)

        self.assertEqual(params.W1.shape, (1433, 32))
        self.assertEqual(params.W2.shape, (32, 32))
        self.assertEqual(params.w.shape, (32, 7))
        self.assertEqual(params.b.shape, (1, 7))
        self.assertFalse(params.b.any())

    def test_glorot_range(self):
        """Test weights stay inside the uniform scaling bound."""
        params = init_params(0, 20, 10, 3)

        self.assertLessEqual(np.abs(params.W1).max(), np.sqrt(6 / 30))

    def test_non_positive_dims(self):
        """Test zero dimensions are rejected."""
        with self.assertRaises(ValueError):
            init_params(0, 0, 4, 2)


class FreezeTests(SimpleTestCase):
    """Test frozen parameter groups."""

    def test_frozen_head_refuses_update(self):
        """Test updating a frozen group raises."""
        params = init_params(0, 4, 3, 2).frozen(head=True)

        with self.assertRaises(ValueError):
            params.updated(w=np.zeros((3, 2)))

    def test_trainable_names(self):
        """Test trainable() follows the freeze flags."""
        params = init_params(0, 4, 3, 2)

        self.assertEqual(params.frozen(encoder=True).trainable(), ["w", "b"])
        self.assertEqual(params.frozen(head=True).trainable(), ["W1", "W2"])


class SaveParamsTests(SimpleTestCase):
    """Test params.json round trips."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "params.json"

    def tearDown(self):
        self.tmp.cleanup()

    def test_round_trip_exact(self):
        """Test saved parameters reload bit-identically."""
        params = init_params(3, 6, 4, 2).frozen(encoder=True)

        save_params(params, self.path)
        loaded = load_params(self.path)

        for name, value in params.arrays().items():
            self.assertTrue(np.array_equal(value, getattr(loaded, name)), name)
        self.assertTrue(loaded.freeze_encoder)
        self.assertEqual(loaded.seed, 3)

    def test_shape_mismatch_rejected(self):
        """Test a params file whose arrays disagree with d, h, C fails."""
        save_params(init_params(0, 6, 4, 2), self.path)
        document = json.loads(self.path.read_text())
        document["h"] = 5
        self.path.write_text(json.dumps(document))

        with self.assertRaises(ConfigError):
            load_params(self.path)


class ForwardTests(SimpleTestCase):
    """Test the two-layer encoder and head."""

    def test_matches_straight_line_computation(self):
        """Test forward against plain numpy on the six-node graph."""
        graph = six_node_graph()
        params = init_params(11, graph.d, 4, graph.C)
        A_hat = normalize_adjacency(graph.A)

        out = forward(params, A_hat, graph.X)

        A, X = A_hat.toarray(), graph.X.toarray()
        H1 = np.maximum(A @ (X @ params.W1), 0)
        H = np.maximum(A @ (H1 @ params.W2), 0)
        Z = np.maximum(H @ params.w + params.b, 0)
        np.testing.assert_allclose(out.H, H, atol=1e-12)
        np.testing.assert_allclose(out.Z, Z, atol=1e-12)

    def test_hidden_non_negative(self):
        """Test hidden features are relu outputs."""
        graph = six_node_graph()

        out = forward(init_params(0, graph.d, 4, 2), normalize_adjacency(graph.A), graph.X)

        self.assertTrue(np.all(out.H >= 0))

    def test_zero_weights_give_zero_logits(self):
        """Test Z = relu(b) = 0 when every weight is zero."""
        graph = six_node_graph()
        params = init_params(0, graph.d, 4, 2)
        zeros = params.updated(**{k: np.zeros_like(v) for k, v in params.arrays().items()})

        out = forward(zeros, normalize_adjacency(graph.A), graph.X)

        self.assertFalse(out.Z.any())

    def test_single_isolated_node(self):
        """Test a lone node sees A_hat = [1]."""
        params = init_params(0, 3, 3, 2)
        X = np.ones((1, 3))

        out = forward(params, normalize_adjacency(sp.csr_matrix((1, 1))), X)

        H = np.maximum(np.maximum(X @ params.W1, 0) @ params.W2, 0)
        np.testing.assert_allclose(out.H, H)

    def test_linear_head(self):
        """Test linear_head skips the final relu."""
        graph = six_node_graph()
        params = init_params(0, graph.d, 4, 2)
        A_hat = normalize_adjacency(graph.A)

        out = forward(params, A_hat, graph.X, linear_head=True)

        np.testing.assert_allclose(out.Z, out.H @ params.w + params.b)
