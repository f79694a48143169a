from __future__ import annotations

import json
from typing import Any

from django.core.management.base import CommandError, CommandParser

from dynamics.exceptions import InvalidPermutationError, InvalidSystemError
from dynamics.interval_systems import random_covering_system
from dynamics.perm_core import rotation, stefan

from ._base import USAGE_ERROR, DynamicsCommand


class Command(DynamicsCommand):
    help = "Emit a rotation or Stefan cycle, or a seeded random covering system as JSON."

    def add_arguments(self, parser: CommandParser) -> None:
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--rotation", nargs=2, type=int, metavar=("N", "M"), help="i -> i+M (mod N)")
        group.add_argument("--stefan", type=int, metavar="N", help="Stefan cycle of odd degree N")
        group.add_argument("--random-system", nargs=2, type=int, metavar=("K", "SEED"))

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            if options["rotation"]:
                self.stdout.write(rotation(*options["rotation"]).notation())
            elif options["stefan"] is not None:
                self.stdout.write(stefan(options["stefan"]).notation())
            else:
                k, seed = options["random_system"]
                system = random_covering_system(k, seed)
                self.stdout.write(json.dumps(system.to_dict(), indent=2))
        except (InvalidPermutationError, InvalidSystemError) as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
