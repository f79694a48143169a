from __future__ import annotations

from typing import Any

from django.core.management.base import CommandError, CommandParser

from dynamics.conv_dynamics import CharSequence, characteristic_numbers, check_sequence
from dynamics.exceptions import CharacteristicNumberError
from dynamics.perm_core import is_cyclic

from ._base import VIOLATION, DynamicsCommand


class Command(DynamicsCommand):
    help = "Print the raw and sorted characteristic sequences of a cyclic permutation."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("perm", help='Cycle "1 3 6 2 4 5", "(1 3 6 2 4 5)" or image table "img:3,2,1"')
        parser.add_argument(
            "--allow-noncyclic",
            action="store_true",
            help="Compute the raw numbers of any permutation and report the bound m'_i ≤ i",
        )

    def handle(self, *args: Any, **options: Any) -> None:
        if options["allow_noncyclic"]:
            p = self.read_permutation(options["perm"])
        else:
            p = self.read_cyclic(options["perm"])
        self.require_degree(p)
        try:
            sequence = CharSequence.from_raw(characteristic_numbers(p))
        except CharacteristicNumberError as exc:
            raise CommandError(str(exc), returncode=VIOLATION) from exc
        self.stdout.write("raw: " + " ".join(map(str, sequence.raw)))
        self.stdout.write("sorted: " + " ".join(map(str, sequence.sorted)))
        verdict = check_sequence(sequence)
        if not is_cyclic(p):
            self.stdout.write(f"{p} is not cyclic; bound m'_i ≤ i: {verdict}")
        if not verdict.passed:
            raise CommandError(f"{p}: {verdict}", returncode=VIOLATION)
