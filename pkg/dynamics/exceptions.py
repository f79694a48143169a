"""Error hierarchy for the dynamics app.

Everything raised on purpose derives from ``DynamicsError`` so callers (the
management commands, the API views) can translate failures in one place.
"""

from __future__ import annotations

from collections.abc import Sequence


class DynamicsError(Exception):
    """Root of all domain errors."""


class InvalidPermutationError(DynamicsError, ValueError):
    pass


class NotCyclicError(DynamicsError):
    """A single n-cycle was required but the permutation has several cycles."""


class CharacteristicNumberError(DynamicsError):
    """Iterating conv∘f never returned to the starting pair within the cap."""


class DimensionMismatchError(DynamicsError, ValueError):
    pass


class ExhaustiveCapExceededError(DynamicsError):
    def __init__(self, n: int, cap: int) -> None:
        self.n = n
        self.cap = cap
        super().__init__(f"exhaustive sweep refused: n={n} exceeds the configured cap {cap} (use --samples)")


class InvalidSystemError(DynamicsError, ValueError):
    pass


class OutOfDomainError(DynamicsError, ValueError):
    pass


class OrbitClosureError(DynamicsError):
    """Orbit closure reached N_max without stabilizing or meeting the δ criterion."""

    def __init__(self, message: str, partial: Sequence[frozenset[object]]) -> None:
        self.partial = tuple(partial)
        super().__init__(message)


class DiscretizationError(DynamicsError):
    def __init__(self, message: str, uncovered: Sequence[int]) -> None:
        self.uncovered = tuple(uncovered)
        super().__init__(f"{message}; uncovered indices: {list(self.uncovered)}")


class ReductionError(DynamicsError):
    pass


class LemmaViolationError(DynamicsError):
    """A computation contradicted the characteristic-sequence bound. Always a real discovery or a bug."""


class PieceCountExceededError(DynamicsError):
    def __init__(self, count: int, cap: int, period: int) -> None:
        self.count = count
        self.cap = cap
        self.period = period
        super().__init__(
            f"f^{period} needs {count} linear pieces, above the cap {cap}; raise PERIODICA_PIECE_CAP and retry"
        )


class PeriodicPointNotFoundError(DynamicsError):
    pass


class CoveringViolationError(DynamicsError):
    pass


class PipelineStageError(DynamicsError):
    def __init__(self, stage: str, cause: Exception) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")


class NoDiagonalError(DynamicsError):
    """A principal minor claimed to be odd has no all-ones diagonal."""
