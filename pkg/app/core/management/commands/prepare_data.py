"""
Django command to convert raw citation files into a canonical dataset.
"""
from core.management.base import PipelineCommand
from graphio.datasets import FORMATS, VAL_SIZE, prepare_dataset


class Command(PipelineCommand):
    """Django command to prepare a dataset directory."""

    help = "Convert .content/.cites files into the canonical dataset format."

    def add_arguments(self, parser):
        parser.add_argument("--raw", required=True, help="Directory with raw files.")
        parser.add_argument("--out", required=True, help="Output dataset directory.")
        parser.add_argument("--format", default=FORMATS[0], choices=FORMATS)
        parser.add_argument("--name")
        parser.add_argument("--train-size", type=int)
        parser.add_argument("--val-size", type=int, default=VAL_SIZE)
        parser.add_argument("--drop-dangling", action="store_true")

    def run(self, **options):
        settings = {
            "raw": str(options["raw"]),
            "format": options["format"],
            "name": options["name"],
            "train_size": options["train_size"],
            "val_size": options["val_size"],
            "drop_dangling": options["drop_dangling"],
        }
        self.write_config(options["out"], {"prepare": settings}, directory=True)

        self.stdout.write(f"Preparing dataset from {options['raw']}...")
        out = prepare_dataset(
            options["raw"],
            options["out"],
            fmt=options["format"],
            name=options["name"],
            train_size=options["train_size"],
            val_size=options["val_size"],
            drop_dangling=options["drop_dangling"],
        )
        self.stdout.write(self.style.SUCCESS(f"Dataset written to {out}"))
