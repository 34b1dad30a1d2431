"""
Tests for the training phases and methods.
"""
from unittest.mock import patch

import numpy as np

from django.test import SimpleTestCase

from core.exceptions import DivergenceError, NonFiniteError
from graphio.synthetic import block_graph
from model.params import init_params
from train.config import RunConfig
from train.objective import TrainingObjective
from train.phases import rst_labels, train_phase1, train_phase2, train_phase3
from train.pipeline import method_stages, train_hcref, train_method, train_variant
from train.rundir import RunLog


def small_config(**kwargs):
    """Create and return a config small enough for unit tests."""
    defaults = {
        "dataset": "unused",
        "epsilon": 0.2,
        "T_atk": 3,
        "num_samples": 3,
        "epochs_per_phase": 3,
        "hidden": 4,
        "alpha": 1.0,
        "beta": 1.0,
    }
    defaults.update(kwargs)
    return RunConfig(**defaults)


def same(first, second):
    """Return whether two parameter sets are bit-identical."""
    return all(
        np.array_equal(value, getattr(second, name))
        for name, value in first.arrays().items()
    )


class PhaseOneTests(SimpleTestCase):
    """Test clean-graph pre-training."""

    def setUp(self):
        self.graph = block_graph(n=12, seed=1)

    def test_zero_epochs_returns_init(self):
        """Test zero epochs leaves the seeded initialization."""
        cfg = small_config(epochs_per_phase=0)

        params = train_phase1(self.graph, cfg)

        self.assertTrue(same(params, init_params(cfg.seed, self.graph.d, 4, self.graph.C)))

    def test_loss_decreases(self):
        """Test the logged cross-entropy falls over training."""
        log = RunLog()

        train_phase1(self.graph, small_config(epochs_per_phase=40), log)

        losses = log.column("L_CE")
        self.assertEqual(len(losses), 40)
        self.assertLess(losses[-1], losses[0])

    def test_divergence_raised(self):
        """Test a non-finite gradient stops training with the epoch."""
        with patch.object(TrainingObjective, "step", side_effect=NonFiniteError("gradient")):
            with self.assertRaises(DivergenceError) as ctx:
                train_phase1(self.graph, small_config())

        self.assertEqual(ctx.exception.phase, "phase1")
        self.assertEqual(ctx.exception.epoch, 1)


class AdversarialPhaseTests(SimpleTestCase):
    """Test the frozen-group phases."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.graph = block_graph(n=12, seed=1)
        cls.cfg = small_config()
        cls.phase1 = train_phase1(cls.graph, cls.cfg)
        cls.soft = rst_labels(cls.phase1, cls.graph)

    def test_soft_labels_keep_training_labels(self):
        """Test training nodes keep their true labels."""
        train = self.graph.train

        np.testing.assert_array_equal(self.soft.labels[train], self.graph.y[train])
        self.assertFalse(self.soft.pseudo[train].any())
        self.assertEqual(self.soft.sources()[train[0]], "true")

    def test_phase2_freezes_head(self):
        """Test the head is bit-identical after phase 2."""
        params = train_phase2(self.phase1, self.graph, self.soft, self.cfg)

        self.assertTrue(np.array_equal(params.w, self.phase1.w))
        self.assertTrue(np.array_equal(params.b, self.phase1.b))
        self.assertFalse(np.array_equal(params.W1, self.phase1.W1))

    def test_phase3_freezes_encoder(self):
        """Test the encoder is bit-identical after phase 3."""
        params = train_phase3(self.phase1, self.graph, self.soft, self.cfg)

        self.assertTrue(np.array_equal(params.W1, self.phase1.W1))
        self.assertTrue(np.array_equal(params.W2, self.phase1.W2))
        self.assertFalse(np.array_equal(params.w, self.phase1.w))

    def test_log_rows_continue_epochs(self):
        """Test adversarial rows continue the global epoch count."""
        log = RunLog()

        train_phase2(self.phase1, self.graph, self.soft, self.cfg, log, epoch_offset=3)

        self.assertEqual(log.column("epoch"), [4, 5, 6])
        self.assertEqual(set(log.column("phase")), {"phase2"})
        self.assertTrue(all(value != "" for value in log.column("attack_loss")))

    def test_on_epoch_accuracy_logged(self):
        """Test the epoch callback result is stored in the log."""
        log = RunLog()
        seen = []

        def on_epoch(phase, epoch, params):
            seen.append((phase, epoch))
            return 0.5

        train_phase3(self.phase1, self.graph, self.soft, self.cfg, log, on_epoch=on_epoch)

        self.assertEqual(seen, [("phase3", 1), ("phase3", 2), ("phase3", 3)])
        self.assertEqual(log.column("acc_under_attack"), [0.5, 0.5, 0.5])


class MethodTests(SimpleTestCase):
    """Test whole training methods."""

    def setUp(self):
        self.graph = block_graph(n=12, seed=1)

    def test_hcref_deterministic(self):
        """Test two seeded runs on 50 nodes give identical parameters and logs."""
        graph = block_graph(n=50, seed=2, train_per_class=5)
        cfg = small_config(T_atk=2, epochs_per_phase=2)

        first = train_hcref(graph, cfg)
        second = train_hcref(graph, cfg)

        self.assertTrue(same(first.params, second.params))
        self.assertEqual(first.log.rows, second.log.rows)

    def test_hcref_log_and_snapshots(self):
        """Test the log covers three phases and every snapshot is kept."""
        result = train_hcref(self.graph, small_config())

        self.assertEqual(result.log.column("epoch"), list(range(1, 10)))
        self.assertEqual(
            result.log.column("phase"), ["phase1"] * 3 + ["phase2"] * 3 + ["phase3"] * 3
        )
        self.assertEqual(set(result.snapshots), {"phase1", "phase2", "phase3"})
        self.assertTrue(same(result.snapshots["phase3"], result.params))

    def test_gcn_stops_after_phase1(self):
        """Test the plain method trains phase 1 only."""
        result = train_hcref(self.graph, small_config(method="gcn"))

        self.assertEqual(len(result.log), 3)
        self.assertIsNone(result.soft_labels)

    def test_cons_d_without_weight_matches_tgd(self):
        """Test logit smoothing with beta = 0 degenerates to plain adversarial training."""
        cons_d = train_variant(self.graph, small_config(method="cons_d", beta=0.0))
        tgd = train_variant(self.graph, small_config(method="tgd"))

        self.assertTrue(same(cons_d.params, tgd.params))

    def test_hc2_keeps_phase1_encoder(self):
        """Test the head-only variant never touches the encoder."""
        result = train_variant(self.graph, small_config(method="hc2"))

        self.assertEqual(len(result.log), 9)
        self.assertTrue(np.array_equal(result.params.W1, result.snapshots["phase1"].W1))

    def test_random_variant_logs_no_attack_loss(self):
        """Test random deletion training leaves the attack column empty."""
        result = train_variant(self.graph, small_config(method="random"))

        self.assertEqual(result.log.column("attack_loss", phase="random"), [""] * 6)

    def test_variant_lengths_match(self):
        """Test every adversarial method spends 2 * E epochs after phase 1."""
        cfg = small_config()
        for method in ("hcref", "hc1", "hc2", "hc_uncon", "cons_h", "cons_d", "tgd", "random"):
            stages = method_stages(cfg.derive(method=method))

            self.assertEqual(sum(stage.epochs for stage in stages), 6, method)

    def test_unconstrained_variant_freezes_nothing(self):
        """Test hc_uncon trains every group in both stages."""
        stages = method_stages(small_config(method="hc_uncon"))

        self.assertFalse(any(s.freeze_encoder or s.freeze_head for s in stages))

    def test_unknown_method(self):
        """Test an unknown method is refused."""
        with self.assertRaises(ValueError):
            train_method(self.graph, small_config(method="gat"))

    def test_variant_refuses_hcref(self):
        """Test train_variant points hcref callers elsewhere."""
        with self.assertRaises(ValueError):
            train_variant(self.graph, small_config(method="hcref"))
