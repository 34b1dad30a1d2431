"""
Tests for resolving and persisting run configurations.
"""
import json
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from core import rng
from core.exceptions import ConfigError
from train.config import RunConfig, load_config, load_grid, resolve_config, save_config


class ResolveConfigTests(SimpleTestCase):
    """Test merging defaults, files and overrides."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, payload):
        """Create and return a JSON file in the temp directory."""
        path = self.root / name
        path.write_text(json.dumps(payload))
        return path

    def test_defaults(self):
        """Test unset keys take the project defaults."""
        cfg = resolve_config(overrides={"dataset": "cora"})

        self.assertEqual(cfg.method, "hcref")
        self.assertEqual(cfg.T_atk, 40)
        self.assertEqual(cfg.lam, 1.0)
        self.assertEqual(cfg.mu0, 200.0)
        self.assertEqual(cfg.alpha, 16.0)
        self.assertEqual(cfg.beta, 32.0)
        self.assertEqual(cfg.seeds, (0, 1, 2))

    def test_dataset_defaults(self):
        """Test each citation dataset gets its own trade-off weights and rate."""
        cora = resolve_config(overrides={"dataset": "cora"})
        citeseer = resolve_config(overrides={"dataset": "data/CiteSeer"})

        self.assertEqual((cora.alpha, cora.beta, cora.epsilon), (16.0, 32.0, 0.2))
        self.assertEqual((citeseer.alpha, citeseer.beta, citeseer.epsilon), (0.05, 0.05, 0.05))

    def test_unknown_dataset_uses_project_defaults(self):
        """Test a dataset without its own entry keeps the project defaults."""
        cfg = resolve_config(overrides={"dataset": "runs/toy"})

        self.assertEqual((cfg.alpha, cfg.beta, cfg.epsilon), (16.0, 32.0, 0.05))

    def test_file_wins_over_dataset_defaults(self):
        """Test a config file overrides the dataset defaults."""
        path = self.write("c.json", {"dataset": "citeseer", "beta": 1.5})

        cfg = resolve_config(path, {"epsilon": 0.1})

        self.assertEqual(cfg.alpha, 0.05)
        self.assertEqual(cfg.beta, 1.5)
        self.assertEqual(cfg.epsilon, 0.1)

    def test_cw_step_default(self):
        """Test the CW loss defaults to the small initial step."""
        cfg = resolve_config(overrides={"dataset": "cora", "attack_loss": "CW"})

        self.assertEqual(cfg.mu0, 0.1)

    def test_file_then_overrides(self):
        """Test overrides win over the file, which wins over defaults."""
        path = self.write("c.json", {"dataset": "citeseer", "alpha": 3.0, "beta": 4.0})

        cfg = resolve_config(path, {"beta": 5.0, "hidden": None})

        self.assertEqual(cfg.dataset, "citeseer")
        self.assertEqual(cfg.alpha, 3.0)
        self.assertEqual(cfg.beta, 5.0)
        self.assertEqual(cfg.hidden, 32)

    def test_lambda_key(self):
        """Test the step multiplier is read from the 'lambda' key."""
        path = self.write("c.json", {"dataset": "cora", "lambda": 0.5})

        self.assertEqual(resolve_config(path).lam, 0.5)

    def test_missing_dataset(self):
        """Test a config without a dataset is refused."""
        with self.assertRaises(ConfigError):
            resolve_config()

    def test_epsilon_outside_open_interval(self):
        """Test epsilon must lie strictly between 0 and 1."""
        for epsilon in (0.0, 1.0, -0.1):
            with self.assertRaises(ConfigError):
                resolve_config(overrides={"dataset": "cora", "epsilon": epsilon})

    def test_dropout_fixed(self):
        """Test a non-zero dropout is refused."""
        with self.assertRaises(ConfigError):
            resolve_config(overrides={"dataset": "cora", "dropout": 0.5})

    def test_unknown_method(self):
        """Test an unknown method name is refused."""
        with self.assertRaises(ConfigError):
            resolve_config(overrides={"dataset": "cora", "method": "gat"})

    def test_missing_file(self):
        """Test a missing config file raises FileNotFoundError."""
        with self.assertRaises(FileNotFoundError):
            resolve_config(self.root / "absent.json")

    def test_save_and_load(self):
        """Test a saved config reloads equal and records provenance."""
        cfg = resolve_config(overrides={"dataset": "cora", "lambda": 2.0, "seed": 4})
        path = self.root / "config.json"

        save_config(cfg, path)

        document = json.loads(path.read_text())
        self.assertEqual(document["config"]["lambda"], 2.0)
        self.assertIn("code_version", document)
        self.assertEqual(document["rng"]["algorithm"], rng.ALGORITHM)
        self.assertEqual(load_config(path), cfg)

    def test_attack_settings(self):
        """Test attack settings carry the config and switch mu0 with the loss."""
        cfg = RunConfig(dataset="cora", epsilon=0.1, mu0=200.0)

        ce = cfg.attack_settings(iters=7)
        cw = cfg.attack_settings(loss_kind="CW")

        self.assertEqual(ce.T_atk, 7)
        self.assertEqual(ce.epsilon, 0.1)
        self.assertEqual(cw.mu0, 0.1)
        self.assertEqual(cw.T_atk, 40)


class LoadGridTests(SimpleTestCase):
    """Test sweep grid files."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "grid.json"

    def tearDown(self):
        self.tmp.cleanup()

    def test_defaults_filled(self):
        """Test attacks, epsilons and seeds get defaults."""
        self.path.write_text(json.dumps({"config": {"dataset": "cora"}, "methods": ["gcn"]}))

        cfg, grid = load_grid(self.path)

        self.assertEqual(cfg.dataset, "cora")
        self.assertEqual(grid["methods"], ["gcn"])
        self.assertEqual(grid["attacks"], ["CE", "CW"])
        self.assertEqual(grid["epsilons"], [0.05, 0.10, 0.15, 0.20])
        self.assertEqual(grid["seeds"], [0, 1, 2])

    def test_unknown_method_rejected(self):
        """Test a grid naming an unknown method is refused."""
        self.path.write_text(json.dumps({"config": {"dataset": "cora"}, "methods": ["x"]}))

        with self.assertRaises(ConfigError):
            load_grid(self.path)

    def test_missing_grid(self):
        """Test a missing grid file raises FileNotFoundError."""
        with self.assertRaises(FileNotFoundError):
            load_grid(self.path)
