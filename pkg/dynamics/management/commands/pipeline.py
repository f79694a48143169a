from __future__ import annotations

import logging
from typing import Any

from django.core.management.base import CommandError, CommandParser

from dynamics.exceptions import InvalidSystemError, PipelineStageError
from dynamics.interval_systems import CoveringSystem, PipelineReport, parse_rational, run_pipeline
from dynamics.models import PipelineRun

from ._base import USAGE_ERROR, VIOLATION, DynamicsCommand

logger = logging.getLogger(__name__)


def _intervals(system: CoveringSystem) -> str:
    return " ∪ ".join(f"[{a}, {b}]" for a, b in system.intervals)


class Command(DynamicsCommand):
    help = "Run a covering system through discretization and reduction to an exactly verified periodic point."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("system", help="Covering-system JSON file")
        parser.add_argument("--delta", help='Snapping granularity as "p/q" (default: 1/1000 of the shortest interval)')
        parser.add_argument("--nmax", type=int, help="Orbit-closure step limit (default PERIODICA_ORBIT_NMAX)")
        parser.add_argument("--report", metavar="PATH", help="Write every stage as JSON")
        parser.add_argument("--save", action="store_true", help="Store the run in the database")
        parser.add_argument("--label", default="", help="Label for the saved run")

    def handle(self, *args: Any, **options: Any) -> None:
        data = self.read_json(options["system"])
        try:
            system = CoveringSystem.from_dict(data)
            delta = parse_rational(options["delta"]) if options["delta"] is not None else None
        except InvalidSystemError as exc:
            raise CommandError(f"invalid covering system: {exc}", returncode=USAGE_ERROR) from exc
        if delta is not None and delta <= 0:
            raise CommandError("--delta must be positive", returncode=USAGE_ERROR)
        if options["nmax"] is not None and options["nmax"] < 1:
            raise CommandError("--nmax must be at least 1", returncode=USAGE_ERROR)
        try:
            report = run_pipeline(system, delta, options["nmax"])
        except PipelineStageError as exc:
            raise CommandError(str(exc), returncode=VIOLATION) from exc
        self.print_stages(report)
        if options["report"]:
            self.write_json(options["report"], report.to_dict())
        if options["save"]:
            run = PipelineRun.from_report(report, options["label"])
            run.save()
            logger.info("Saved pipeline run %s", run.pk)

    def print_stages(self, report: PipelineReport) -> None:
        closure = report.discretization.closure
        reduction = report.reduction
        witness = report.witness
        cuts = ",".join(map(str, reduction.partition.cuts)) or "-"
        self.stdout.write(f"system: {_intervals(report.system)} (k={report.system.k})")
        self.stdout.write(f"minimal: {_intervals(report.minimal)}")
        self.stdout.write(
            f"orbit closure: N={closure.N} ({closure.reason}), grid M_{report.discretization.level} "
            f"of {len(report.svm.grid)} points"
        )
        self.stdout.write(f"set-valued map: n={report.svm.n}")
        self.stdout.write(f"reduced: {reduction.perm} cuts {cuts}")
        self.stdout.write(
            f"witness: r={witness.r} s={witness.s} l={witness.period} span [{report.hint.lo}, {report.hint.hi}]"
        )
        self.stdout.write(f"x0 = {report.point.x0}, period {report.point.period}")
