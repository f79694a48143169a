from __future__ import annotations

import logging
from typing import Any

from django.core.management.base import CommandError, CommandParser

from dynamics.exceptions import ExhaustiveCapExceededError, InvalidPermutationError
from dynamics.lemma_lab import verify_all, verify_random
from dynamics.models import SweepRun

from ._base import USAGE_ERROR, VIOLATION, DynamicsCommand

logger = logging.getLogger(__name__)


class Command(DynamicsCommand):
    help = "Check lemma and matrix identities on every n-cycle, or on a seeded random sample."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--n", type=int, required=True, help="Degree of the cycles")
        parser.add_argument(
            "--props",
            default="lemma",
            help=(
                "Comma-separated: lemma, charpoly, minpoly, order, powers, prop_gr, krylov, krylov_intervals, "
                "minor_path, or all"
            ),
        )
        parser.add_argument("--samples", type=int, help="Sample this many random cycles instead of enumerating")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--jobs", type=int, help="Worker processes (default PERIODICA_DEFAULT_JOBS)")
        parser.add_argument("--json", metavar="PATH", help="Write the report as JSON")
        parser.add_argument("--save", action="store_true", help="Store the run in the database")

    def handle(self, *args: Any, **options: Any) -> None:
        n, samples = options["n"], options["samples"]
        try:
            if samples is not None:
                report = verify_random(n, samples, options["seed"], options["props"], jobs=options["jobs"])
            else:
                report = verify_all(n, options["props"], jobs=options["jobs"])
        except (ExhaustiveCapExceededError, InvalidPermutationError) as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        self.stdout.write(report.format_table())
        if options["json"]:
            self.write_json(options["json"], report.to_dict())
        if options["save"]:
            run = SweepRun.from_report(report)
            run.save()
            logger.info("Saved sweep run %s", run.pk)
        if not report.passed:
            raise CommandError(f"{len(report.failures)} failures among {report.total} cycles", returncode=VIOLATION)
