"""
Tests for flip sets and relaxed adjacency.
"""
import numpy as np

from django.test import SimpleTestCase

from attack.perturbation import (
    FlipSet,
    PerturbVector,
    apply_flips,
    edge_budget,
    relaxed_adjacency,
)
from graphio.graph import adjacency_from_edges, num_pairs
from graphio.synthetic import block_graph


def path_graph():
    """Create and return the path 0 - 1 - 2."""
    return adjacency_from_edges(3, [0, 1], [1, 2])


class EdgeBudgetTests(SimpleTestCase):
    """Test the flip budget."""

    def test_floor(self):
        """Test the budget rounds down."""
        self.assertEqual(edge_budget(0.05, 5278), 263)
        self.assertEqual(edge_budget(0.05, 19), 0)

    def test_exact_product_not_lost_to_rounding(self):
        """Test 0.29 * 100, which is 28.999... in floating point, gives 29."""
        self.assertEqual(edge_budget(0.29, 100), 29)


class RelaxedAdjacencyTests(SimpleTestCase):
    """Test the continuous flip rule."""

    def test_zero_vector_is_identity(self):
        """Test s = 0 leaves A unchanged."""
        A = path_graph()

        np.testing.assert_array_equal(relaxed_adjacency(A, np.zeros(3)), A.toarray())

    def test_adds_missing_pair(self):
        """Test s = 1 on (0, 2) inserts that edge."""
        s = np.array([0.0, 1.0, 0.0])

        result = relaxed_adjacency(path_graph(), s)

        self.assertEqual(result[0, 2], 1.0)
        self.assertEqual(result[2, 0], 1.0)

    def test_half_on_empty_graph(self):
        """Test s = 0.5 on an empty graph fills every off-diagonal entry."""
        A = adjacency_from_edges(3, [], [])

        result = relaxed_adjacency(A, np.full(3, 0.5))

        expected = np.full((3, 3), 0.5)
        np.fill_diagonal(expected, 0.0)
        np.testing.assert_array_equal(result, expected)

    def test_binary_vector_matches_apply_flips(self):
        """Test a 0/1 vector reproduces apply_flips exactly."""
        graph = block_graph(n=10)
        mask = np.random.default_rng(0).random(num_pairs(10)) < 0.2
        flips = FlipSet.from_mask(mask, 10)

        relaxed = relaxed_adjacency(graph.A, mask.astype(float))

        np.testing.assert_array_equal(relaxed, apply_flips(graph.A, flips).toarray())


class ApplyFlipsTests(SimpleTestCase):
    """Test binary flips."""

    def test_empty_flips(self):
        """Test no flips returns an equal adjacency."""
        A = path_graph()

        self.assertEqual(abs(apply_flips(A, FlipSet.empty(3)) - A).nnz, 0)

    def test_path_example(self):
        """Test flipping (0, 1) and (0, 2) on the path leaves 0-2 and 1-2."""
        flips = FlipSet.from_pairs(3, [0, 0], [1, 2])

        result = apply_flips(path_graph(), flips).toarray()

        expected = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]], dtype=float)
        np.testing.assert_array_equal(result, expected)

    def test_involution(self):
        """Test applying the same flips twice restores A."""
        graph = block_graph(n=12, seed=2)
        flips = FlipSet.from_mask(np.random.default_rng(1).random(num_pairs(12)) < 0.3, 12)

        twice = apply_flips(apply_flips(graph.A, flips), flips)

        self.assertEqual(abs(twice - graph.A).nnz, 0)

    def test_pairs_round_trip(self):
        """Test FlipSet pairs come back in upper-triangle order."""
        flips = FlipSet.from_pairs(5, [3, 0], [4, 2])

        rows, cols = flips.pairs()

        self.assertEqual(list(zip(rows.tolist(), cols.tolist())), [(0, 2), (3, 4)])
        self.assertEqual(len(flips), 2)

    def test_perturb_vector_zeros(self):
        """Test a fresh vector is all zeros over every pair."""
        s = PerturbVector.zeros(6, 2)

        self.assertEqual(s.s.shape, (15,))
        self.assertFalse(s.s.any())
