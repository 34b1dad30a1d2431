"""
EvalReport: the JSON document written by `evaluate`.
"""
from dataclasses import dataclass, field

from core.reports import write_json


def cell_key(attack, epsilon):
    return f"{attack}@{epsilon:g}"


@dataclass
class EvalReport:
    clean_acc: float
    attacked_acc: dict = field(default_factory=dict)
    omega: dict = field(default_factory=dict)
    misclass_grid: list = field(default_factory=list)
    series: list = None
    metadata: dict = field(default_factory=dict)

    def add_attack(self, attack, epsilon, accuracy, omega, train_epsilon=None):
        """Record one attacked cell; the misclassification rate is 1 - accuracy."""
        key = cell_key(attack, epsilon)
        self.attacked_acc[key] = accuracy
        self.omega[key] = omega
        self.misclass_grid.append(
            {
                "train_epsilon": train_epsilon,
                "attack": attack,
                "attack_epsilon": epsilon,
                "rate": 1.0 - accuracy,
            }
        )

    def to_dict(self):
        return {
            "clean_acc": self.clean_acc,
            "attacked_acc": dict(self.attacked_acc),
            "omega": dict(self.omega),
            "misclass_grid": list(self.misclass_grid),
            "series": self.series,
            "metadata": self.metadata,
        }

    def write(self, path):
        write_json(path, self.to_dict())
