"""
Django command to run the finite-difference gradient suite.
"""
from django.core.management.base import CommandError

from core.management.base import FAILURE, PipelineCommand
from core.reports import write_json
from evaluation.gradcheck import run_suite


class Command(PipelineCommand):
    """Django command to validate every analytic gradient."""

    help = "Check tape gradients against central differences on fixtures."

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", help="Optional results JSON path.")

    def run(self, **options):
        if options["out"]:
            self.write_config(options["out"], {"grad_check": {"seed": options["seed"]}})

        results = run_suite(options["seed"])
        failed = 0
        for label, result in results:
            self.stdout.write(f"{label}: {result.summary()}")
            failed += not result.passed
        if options["out"]:
            write_json(
                options["out"],
                {
                    label: {
                        "passed": result.passed,
                        "checked": result.checked,
                        "worst_error": result.worst_error,
                    }
                    for label, result in results
                },
            )
        if failed:
            raise CommandError(
                f"{failed} of {len(results)} gradient checks failed", returncode=FAILURE
            )
        self.stdout.write(self.style.SUCCESS(f"All {len(results)} gradient checks passed"))
