"""
Django command to attack a trained run and write the flips.
"""
from attack.flipfiles import write_flips
from core.management.base import PipelineCommand
from evaluation.attacks import ATTACKS, attack_graph
from train.rundir import RunDirectory


class Command(PipelineCommand):
    """Django command to generate an edge-flip attack."""

    help = "Attack the final parameters of --run and write flips.tsv."

    def add_arguments(self, parser):
        parser.add_argument("--run", required=True, help="Run directory.")
        parser.add_argument("--method", default="ce-pgd", choices=list(ATTACKS))
        parser.add_argument("--epsilon", type=float)
        parser.add_argument("--iters", type=int)
        parser.add_argument(
            "--victim",
            choices=["train", "test-with-true-labels", "all-with-pseudo-labels"],
        )
        parser.add_argument("--out", required=True, help="flips.tsv path.")

    def run(self, **options):
        run_dir = RunDirectory(options["run"])
        cfg = run_dir.read_config()
        if options["victim"]:
            cfg = cfg.derive(victim=options["victim"])
        epsilon = cfg.epsilon if options["epsilon"] is None else options["epsilon"]
        iters = cfg.eval_attack_iters if options["iters"] is None else options["iters"]
        self.write_config(
            options["out"],
            {
                **cfg.metadata(),
                "run": str(run_dir.path),
                "attack": {"method": options["method"], "epsilon": epsilon, "iters": iters},
            },
        )
        params = run_dir.read_params()
        graph = self.load_graph(cfg)

        self.stdout.write(f"Running {options['method']} at epsilon={epsilon}...")
        flips = attack_graph(params, graph, options["method"], epsilon, cfg, iters=iters)
        path = write_flips(options["out"], flips, graph.A)
        self.stdout.write(self.style.SUCCESS(f"{len(flips)} flips written to {path}"))
