from __future__ import annotations

from typing import Any

from django.core.management.base import CommandParser

from dynamics.conv_dynamics import markov_graph

from ._base import DynamicsCommand


class Command(DynamicsCommand):
    help = "Write the Markov graph of a permutation in DOT format."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("perm")
        parser.add_argument("--dot", metavar="PATH", help="Write the DOT text here instead of stdout")

    def handle(self, *args: Any, **options: Any) -> None:
        p = self.read_permutation(options["perm"])
        self.require_degree(p)
        dot = markov_graph(p).to_dot()
        if options["dot"]:
            self.write_text(options["dot"], dot)
        else:
            self.stdout.write(dot, ending="")
