"""Shared plumbing for the dynamics management commands.

Exit codes: 0 success, 1 property violated or pipeline stage failed, 2 bad usage or unreadable input.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from django.core.management.base import BaseCommand, CommandError

from dynamics.exceptions import InvalidPermutationError, NotCyclicError
from dynamics.perm_core import AnyPermutation, CyclicPermutation, as_cyclic, parse_permutation

logger = logging.getLogger(__name__)

VIOLATION = 1
USAGE_ERROR = 2


class DynamicsCommand(BaseCommand):
    def read_permutation(self, text: str) -> AnyPermutation:
        try:
            return parse_permutation(text)
        except InvalidPermutationError as exc:
            raise CommandError(f"invalid permutation {text!r}: {exc}", returncode=USAGE_ERROR) from exc

    def read_cyclic(self, text: str) -> CyclicPermutation:
        p = self.read_permutation(text)
        try:
            return as_cyclic(p)
        except NotCyclicError as exc:
            raise CommandError(
                f"{p} is not cyclic: the characteristic-sequence bound only holds for single n-cycles",
                returncode=USAGE_ERROR,
            ) from exc

    def require_degree(self, p: AnyPermutation, minimum: int = 2) -> None:
        if p.degree < minimum:
            raise CommandError(
                f"{p} has degree {p.degree}; this command needs degree ≥ {minimum}", returncode=USAGE_ERROR
            )

    def write_text(self, path: str, text: str) -> None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CommandError(f"cannot write {path}: {exc}", returncode=VIOLATION) from exc
        logger.info("Wrote %s", path)

    def write_json(self, path: str, data: Any) -> None:
        self.write_text(path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")

    def read_json(self, path: str) -> Any:
        try:
            return json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc}", returncode=USAGE_ERROR) from exc
        except json.JSONDecodeError as exc:
            raise CommandError(f"{path} is not valid JSON: {exc}", returncode=USAGE_ERROR) from exc
