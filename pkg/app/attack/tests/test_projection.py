"""
Tests for the budget projection.
"""
import numpy as np

from django.test import SimpleTestCase

from attack.projection import project_budget


def grid_projection(a, budget, steps=400001):
    """Create and return the projection found by scanning mu on a fine grid."""
    a = np.asarray(a, dtype=np.float64)
    clipped = np.clip(a, 0, 1)
    if clipped.sum() <= budget:
        return clipped
    mus = np.linspace(0, a.max(), steps)
    sums = np.clip(a[None, :] - mus[:, None], 0, 1).sum(axis=1)
    best = mus[np.argmin(np.abs(sums - budget))]
    return np.clip(a - best, 0, 1)


def exact_projection(a, budget):
    """Create and return the projection with mu solved exactly between the
    breakpoints of the piecewise-linear clipped sum."""
    a = np.asarray(a, dtype=np.float64)
    clipped = np.clip(a, 0, 1)
    if clipped.sum() <= budget:
        return clipped
    points = np.unique(np.clip(np.concatenate([[0.0], a, a - 1.0]), 0.0, a.max()))
    sums = np.array([np.clip(a - mu, 0, 1).sum() for mu in points])
    k = int(np.flatnonzero(sums >= budget)[-1])
    low, high = points[k], points[min(k + 1, points.size - 1)]
    drop = sums[k] - sums[min(k + 1, points.size - 1)]
    mu = low if drop == 0 else low + (sums[k] - budget) / drop * (high - low)
    return np.clip(a - mu, 0, 1)


class ProjectBudgetTests(SimpleTestCase):
    """Test projection onto the box with a sum budget."""

    def test_feasible_input_unchanged(self):
        """Test a feasible vector is returned as is."""
        np.testing.assert_array_equal(project_budget([0.2, 0.1], 1), [0.2, 0.1])

    def test_clipped_to_box(self):
        """Test entries are clipped into [0, 1]."""
        np.testing.assert_array_equal(project_budget([-0.5, 1.5], 3), [0.0, 1.0])

    def test_saturating_example(self):
        """Test [1.4, 0.3, -0.2] with budget 1 projects to [1, 0, 0]."""
        result = project_budget([1.4, 0.3, -0.2], 1)

        np.testing.assert_allclose(result, [1.0, 0.0, 0.0], atol=1e-5)

    def test_interior_example(self):
        """Test [0.9, 0.8, 0.3] with budget 1 shifts by 0.35."""
        result = project_budget([0.9, 0.8, 0.3], 1)

        np.testing.assert_allclose(result, [0.55, 0.45, 0.0], atol=1e-5)

    def test_feasible_and_idempotent(self):
        """Test random vectors land in the set and stay there."""
        generator = np.random.default_rng(0)
        for _ in range(20):
            a = generator.normal(0.5, 1.0, size=12)
            budget = generator.integers(1, 5)

            s = project_budget(a, budget)

            self.assertTrue(np.all((s >= 0) & (s <= 1)))
            self.assertLessEqual(s.sum(), budget + 1e-6)
            np.testing.assert_allclose(project_budget(s, budget), s, atol=1e-6)

    def test_matches_grid_oracle(self):
        """Test small vectors against a fine scan over mu."""
        generator = np.random.default_rng(1)
        for m in range(1, 7):
            a = generator.uniform(-0.5, 2.0, size=m)

            np.testing.assert_allclose(
                project_budget(a, 1), grid_projection(a, 1), atol=1e-5
            )

    def test_matches_exact_oracle_random(self):
        """Test 1000 short vectors with fractional budgets against the exact projection."""
        generator = np.random.default_rng(7)
        for _ in range(1000):
            m = int(generator.integers(1, 7))
            a = generator.normal(0.5, 1.0, size=m) * generator.choice([0.5, 1.0, 10.0])
            budget = float(generator.uniform(0.01, m))

            s = project_budget(a, budget)

            np.testing.assert_allclose(s, exact_projection(a, budget), atol=1e-5)
            self.assertTrue(np.all((s >= 0) & (s <= 1)))
            self.assertLessEqual(s.sum(), budget + 1e-6)
            np.testing.assert_allclose(project_budget(s, budget), s, atol=1e-6)

    def test_non_positive_budget(self):
        """Test a zero budget is refused."""
        with self.assertRaises(ValueError):
            project_budget([0.5], 0)
