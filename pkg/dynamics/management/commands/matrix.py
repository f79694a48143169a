from __future__ import annotations

from typing import Any

from django.core.management.base import CommandError, CommandParser

from dynamics.f2_linalg import adjacency_matrix, char_poly, mat_pow, min_poly

from ._base import USAGE_ERROR, DynamicsCommand


class Command(DynamicsCommand):
    help = "Print the GF(2) transition matrix of a permutation, its powers and polynomials."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("perm")
        parser.add_argument("--power", type=int, default=1, metavar="L", help="Print T^L instead of T")
        parser.add_argument("--charpoly", action="store_true", help="Also print det(xI - T) over GF(2)")
        parser.add_argument("--minpoly", action="store_true", help="Also print the minimal polynomial of T")
        parser.add_argument("--method", choices=["hessenberg", "cofactor"], default="hessenberg")

    def handle(self, *args: Any, **options: Any) -> None:
        p = self.read_permutation(options["perm"])
        self.require_degree(p)
        if options["power"] < 0:
            raise CommandError("--power must be non-negative", returncode=USAGE_ERROR)
        t = adjacency_matrix(p)
        self.stdout.write(str(mat_pow(t, options["power"])))
        if options["charpoly"]:
            self.stdout.write(f"charpoly: {char_poly(t, method=options['method'])}")
        if options["minpoly"]:
            self.stdout.write(f"minpoly: {min_poly(t)}")
