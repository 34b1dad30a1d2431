"""
Django command to evaluate a run, clean and under attack.
"""
from pathlib import Path

from attack.flipfiles import read_flips
from core.management.base import PipelineCommand
from evaluation.attacks import ATTACKS, LABELS, attack_graph
from evaluation.metrics import attack_success_rate, evaluate
from evaluation.report import EvalReport
from train.rundir import RunDirectory


class Command(PipelineCommand):
    """Django command to write report.json for a run."""

    help = "Report clean accuracy, accuracy under attack and attack success rates."

    def add_arguments(self, parser):
        parser.add_argument("--run", required=True, help="Run directory.")
        parser.add_argument(
            "--flips", action="append", default=[],
            help="Flips file to apply; may be repeated.",
        )
        parser.add_argument(
            "--attack", action="append", default=[], choices=list(ATTACKS),
            help="Attack to generate; may be repeated.",
        )
        parser.add_argument(
            "--epsilon", action="append", type=float, default=[],
            help="Perturbation rate for --attack; may be repeated.",
        )
        parser.add_argument("--out", required=True, help="report.json path.")

    def run(self, **options):
        run_dir = RunDirectory(options["run"])
        cfg = run_dir.read_config()
        epsilons = options["epsilon"] or [cfg.epsilon]
        metadata = {
            **cfg.metadata(),
            "run": str(run_dir.path),
            "victim": cfg.victim,
            "attacks": options["attack"],
            "epsilons": epsilons,
            "flips": options["flips"],
        }
        self.write_config(options["out"], dict(metadata))
        params = run_dir.read_params()
        graph = self.load_graph(cfg)
        linear_head = cfg.linear_head

        report = EvalReport(clean_acc=evaluate(params, graph, linear_head=linear_head))
        for method in options["attack"]:
            for epsilon in epsilons:
                flips = attack_graph(params, graph, method, epsilon, cfg)
                report.add_attack(
                    LABELS[method],
                    epsilon,
                    evaluate(params, graph, flips=flips, linear_head=linear_head),
                    attack_success_rate(params, graph, flips, linear_head=linear_head),
                    train_epsilon=cfg.epsilon,
                )

        for path in map(Path, options["flips"]):
            flips = read_flips(path, graph.A)
            report.add_attack(
                path.name,
                len(flips) / max(graph.num_edges, 1),
                evaluate(params, graph, flips=flips, linear_head=linear_head),
                attack_success_rate(params, graph, flips, linear_head=linear_head),
                train_epsilon=cfg.epsilon,
            )

        report.series = run_dir.read_series()
        report.metadata = metadata
        report.write(options["out"])
        self.stdout.write(
            self.style.SUCCESS(f"clean_acc={report.clean_acc:.6g} report={options['out']}")
        )
