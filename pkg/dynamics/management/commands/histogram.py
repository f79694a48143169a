from __future__ import annotations

from typing import Any

from django.core.management.base import CommandError, CommandParser

from dynamics.exceptions import ExhaustiveCapExceededError, InvalidPermutationError
from dynamics.lemma_lab import sequence_histogram

from ._base import USAGE_ERROR, DynamicsCommand


class Command(DynamicsCommand):
    help = "Count how often each sorted characteristic sequence occurs among the n-cycles."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--jobs", type=int)
        parser.add_argument("--json", metavar="PATH")

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            histogram = sequence_histogram(options["n"], jobs=options["jobs"])
        except (ExhaustiveCapExceededError, InvalidPermutationError) as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        width = max(len("sequence"), *(len(key) for key in histogram))
        self.stdout.write(f"{'sequence'.ljust(width)}  count")
        for key, count in histogram.items():
            self.stdout.write(f"{key.ljust(width)}  {count}")
        self.stdout.write(f"{'total'.ljust(width)}  {sum(histogram.values())}")
        if options["json"]:
            self.write_json(options["json"], {"n": options["n"], "histogram": histogram})
