"""Verification campaigns over cyclic permutations.

A sweep runs a set of named property checks on every n-cycle (exhaustive) or on a seeded sample
(random), keeps the failures and the histogram of sorted characteristic sequences, and nothing else.
Sweeps split into chunks by the entry following 1 in cycle order; chunk reports merge
commutatively, so ``--jobs`` only changes the wall time.
"""

from __future__ import annotations

import logging
import random
import time
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property
from typing import Any

from django.conf import settings

from .conv_dynamics import (
    CharSequence,
    MarkovGraph,
    characteristic_numbers,
    check_sequence,
    markov_graph,
    min_cycle_length,
)
from .exceptions import ExhaustiveCapExceededError, InvalidPermutationError, LemmaViolationError
from .f2_linalg import (
    BitMatrix,
    F2Poly,
    adjacency_matrix,
    char_poly,
    charpoly_coeff_via_minors,
    cycles_from_minor,
    krylov_independent,
    krylov_intervals,
    krylov_vectors,
    mat_mul,
    mat_pow,
    min_poly,
)
from .perm_core import CyclicPermutation, enumerate_cyclic, from_cycle_notation, power, random_cyclic

logger = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_CAP = 12


class Check(StrEnum):
    LEMMA = "lemma"
    CHARPOLY = "charpoly"
    MINPOLY = "minpoly"
    ORDER = "order"
    POWERS = "powers"
    PROP_GR = "prop_gr"
    KRYLOV = "krylov"
    KRYLOV_INTERVALS = "krylov_intervals"
    MINOR_PATH = "minor_path"


def parse_checks(text: str | Iterable[str]) -> tuple[Check, ...]:
    """Accept "lemma,charpoly", "all", or an iterable of names; result follows declaration order."""
    names = [part.strip() for part in text.split(",")] if isinstance(text, str) else list(text)
    names = [name for name in names if name]
    if "all" in names:
        return tuple(Check)
    try:
        chosen = {Check(name) for name in names}
    except ValueError as exc:
        valid = ", ".join(c.value for c in Check)
        raise InvalidPermutationError(f"unknown property in {names}; choose from {valid} or all") from exc
    return tuple(c for c in Check if c in chosen)


# ---------------------------------------------------------------------------
# Per-permutation checks
# ---------------------------------------------------------------------------


class _Subject:
    """One permutation with the derived objects the checks share, computed on first use."""

    def __init__(self, f: CyclicPermutation) -> None:
        self.f = f
        self.n = f.n

    @cached_property
    def raw(self) -> tuple[int, ...]:
        return characteristic_numbers(self.f)

    @cached_property
    def sequence(self) -> CharSequence:
        return CharSequence.from_raw(self.raw)

    @cached_property
    def graph(self) -> MarkovGraph:
        return markov_graph(self.f)

    @cached_property
    def matrix(self) -> BitMatrix:
        return adjacency_matrix(self.f)

    @cached_property
    def charpoly(self) -> F2Poly:
        return char_poly(self.matrix)


def _check_lemma(s: _Subject) -> str | None:
    verdict = check_sequence(s.sequence)
    return None if verdict.passed else f"{verdict}; sorted {list(s.sequence.sorted)}"


def _check_charpoly(s: _Subject) -> str | None:
    expected = F2Poly.all_ones(s.n - 1)
    return None if s.charpoly == expected else f"char poly {s.charpoly}, expected {expected}"


def _check_minpoly(s: _Subject) -> str | None:
    found = min_poly(s.matrix)
    return None if found == s.charpoly else f"min poly {found} differs from char poly {s.charpoly}"


def _check_order(s: _Subject) -> str | None:
    identity = BitMatrix.identity(s.matrix.dim)
    current = identity
    for exponent in range(1, s.n):
        current = mat_mul(current, s.matrix)
        # the only 1×1 transition matrix is already the identity
        if current == identity and s.n >= 3:
            return f"T^{exponent} = I before T^{s.n}"
    if mat_mul(current, s.matrix) != identity:
        return f"T^{s.n} ≠ I"
    return None


def _check_powers(s: _Subject) -> str | None:
    for exponent in range(1, s.n + 1):
        if mat_pow(s.matrix, exponent) != adjacency_matrix(power(s.f, exponent)):
            return f"T^{exponent} differs from the transition matrix of f^{exponent}"
    return None


def _check_prop_gr(s: _Subject) -> str | None:
    for i, m in enumerate(s.raw, start=1):
        shortest = min_cycle_length(s.graph, i)
        if shortest != m:
            return f"m_{i} = {m} but the shortest cycle through A{i} has length {shortest}"
    return None


def _check_krylov(s: _Subject) -> str | None:
    result = krylov_independent(s.f)
    return None if result.independent else f"Krylov family from α={result.alpha} has rank {result.rank}"


def _check_krylov_intervals(s: _Subject) -> str | None:
    for m, (found, expected) in enumerate(zip(krylov_vectors(s.f), krylov_intervals(s.f), strict=True)):
        if found != expected:
            return f"T^{m} α = {found}, expected the gap indicator {expected}"
    return None


def _check_minor_path(s: _Subject) -> str | None:
    for i in range(1, s.n):
        coefficient = charpoly_coeff_via_minors(s.matrix, i)
        if not coefficient.bit or coefficient.witness is None:
            return f"coefficient of λ^{s.n - 1 - i} vanishes"
        cycles = cycles_from_minor(s.matrix, coefficient.witness)
        vertices = {v for cycle in cycles for v in cycle}
        if len(vertices) < i or any(len(cycle) > i for cycle in cycles):
            return f"witness {coefficient.witness} gives cycles {cycles}, not {i} vertices on cycles of length ≤ {i}"
        if any(s.raw[v - 1] > i for v in vertices):
            return f"a vertex of witness {coefficient.witness} has characteristic number above {i}"
        if sum(1 for m in s.raw if m <= i) < i or s.sequence.sorted[i - 1] > i:
            return f"minor witness at size {i} does not force m'_{i} ≤ {i}"
    return None


CHECKS: dict[Check, Callable[[_Subject], str | None]] = {
    Check.LEMMA: _check_lemma,
    Check.CHARPOLY: _check_charpoly,
    Check.MINPOLY: _check_minpoly,
    Check.ORDER: _check_order,
    Check.POWERS: _check_powers,
    Check.PROP_GR: _check_prop_gr,
    Check.KRYLOV: _check_krylov,
    Check.KRYLOV_INTERVALS: _check_krylov_intervals,
    Check.MINOR_PATH: _check_minor_path,
}


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SweepFailure:
    cycle_order: tuple[int, ...]
    prop: str
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return {"permutation": " ".join(map(str, self.cycle_order)), "property": self.prop, "detail": self.detail}


@dataclass(frozen=True)
class SweepReport:
    n: int
    properties: tuple[str, ...]
    mode: str = "exhaustive"
    total: int = 0
    failures: tuple[SweepFailure, ...] = ()
    histogram: dict[str, int] = field(default_factory=dict)
    elapsed: float = 0.0
    seed: int | None = None
    samples: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: SweepReport) -> SweepReport:
        histogram = Counter(self.histogram)
        histogram.update(other.histogram)
        failures = sorted((*self.failures, *other.failures), key=_failure_order)
        return SweepReport(
            n=self.n,
            properties=self.properties,
            mode=self.mode,
            total=self.total + other.total,
            failures=tuple(failures),
            histogram=dict(sorted(histogram.items(), key=lambda item: _key_order(item[0]))),
            elapsed=max(self.elapsed, other.elapsed),
            seed=self.seed,
            samples=self.samples,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "mode": self.mode,
            "properties": list(self.properties),
            "seed": self.seed,
            "samples": self.samples,
            "total": self.total,
            "passed": self.passed,
            "failures": [failure.to_dict() for failure in self.failures],
            "histogram": dict(self.histogram),
            "elapsed": round(self.elapsed, 6),
        }

    def format_table(self) -> str:
        rows = [
            ("degree", str(self.n)),
            ("mode", self.mode),
            ("properties", ",".join(self.properties) or "-"),
            ("checked", str(self.total)),
            ("failures", str(len(self.failures))),
            ("elapsed", f"{self.elapsed:.3f}s"),
        ]
        if self.seed is not None:
            rows.insert(2, ("seed", str(self.seed)))
        width = max(len(label) for label, _ in rows)
        lines = [f"{label.ljust(width)}  {value}" for label, value in rows]
        for failure in self.failures:
            lines.append(f"FAIL  ({' '.join(map(str, failure.cycle_order))})  {failure.prop}: {failure.detail}")
        if self.histogram:
            key_width = max(len("sequence"), *(len(key) for key in self.histogram))
            lines += ["", f"{'sequence'.ljust(key_width)}  count"]
            lines += [f"{key.ljust(key_width)}  {count}" for key, count in self.histogram.items()]
        return "\n".join(lines)


def _failure_order(failure: SweepFailure) -> tuple[tuple[int, ...], int]:
    return failure.cycle_order, list(Check).index(Check(failure.prop))


def _key_order(key: str) -> tuple[int, ...]:
    return tuple(int(part) for part in key.split(","))


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def _sweep(n: int, checks: Sequence[str], perms: Iterable[CyclicPermutation]) -> SweepReport:
    total = 0
    failures = []
    histogram: Counter[str] = Counter()
    for f in perms:
        total += 1
        subject = _Subject(f)
        histogram[subject.sequence.key] += 1
        for name in checks:
            detail = CHECKS[Check(name)](subject)
            if detail is not None:
                logger.warning("Sweep failure on %s (%s): %s", f, name, detail)
                failures.append(SweepFailure(f.cycle_order, name, detail))
        if Check.LEMMA not in checks:
            verdict = check_sequence(subject.sequence)
            if not verdict.passed:
                logger.error("Histogram key %s of %s breaks the bound: %s", subject.sequence.key, f, verdict)
                detail = f"histogram key {subject.sequence.key}: {verdict}"
                failures.append(SweepFailure(f.cycle_order, Check.LEMMA.value, detail))
    return SweepReport(n=n, properties=tuple(checks), total=total, failures=tuple(failures), histogram=dict(histogram))


def sweep_chunk(n: int, prefix: tuple[int, ...], checks: tuple[str, ...]) -> SweepReport:
    """Exhaustive sweep over the n-cycles whose cycle order starts with (1, *prefix)."""
    return _sweep(n, checks, enumerate_cyclic(n, prefix))


def sweep_orders(n: int, orders: Sequence[tuple[int, ...]], checks: tuple[str, ...]) -> SweepReport:
    return _sweep(n, checks, (from_cycle_notation(order) for order in orders))


def _resolve_jobs(jobs: int | None) -> int:
    return max(1, jobs if jobs is not None else getattr(settings, "PERIODICA_DEFAULT_JOBS", 1))


def _run_chunks(function: Callable[..., SweepReport], arguments: list[tuple[Any, ...]], jobs: int) -> list[SweepReport]:
    if jobs == 1 or len(arguments) == 1:
        return [function(*args) for args in arguments]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(function, *args) for args in arguments]
        return [future.result() for future in futures]


def _combine(n: int, checks: tuple[str, ...], parts: list[SweepReport], **extra: Any) -> SweepReport:
    report = SweepReport(n=n, properties=checks)
    for part in parts:
        report = report.merge(part)
    return SweepReport(
        n=n,
        properties=checks,
        total=report.total,
        failures=report.failures,
        histogram=report.histogram,
        **extra,
    )


def verify_all(
    n: int,
    properties: str | Iterable[str] = (Check.LEMMA,),
    *,
    cap: int | None = None,
    jobs: int | None = None,
) -> SweepReport:
    """Run the chosen checks on every n-cycle."""
    if n < 2:
        raise InvalidPermutationError(f"sweeps need n ≥ 2, got {n}")
    cap = cap if cap is not None else getattr(settings, "PERIODICA_EXHAUSTIVE_CAP", DEFAULT_EXHAUSTIVE_CAP)
    if n > cap:
        raise ExhaustiveCapExceededError(n, cap)
    checks = tuple(c.value for c in parse_checks(properties))
    workers = _resolve_jobs(jobs)
    logger.info("Exhaustive sweep n=%s properties=%s jobs=%s", n, ",".join(checks), workers)
    started = time.perf_counter()
    arguments = [(n, (second,), checks) for second in range(2, n + 1)]
    parts = _run_chunks(sweep_chunk, arguments, workers)
    report = _combine(n, checks, parts, mode="exhaustive", elapsed=time.perf_counter() - started)
    logger.info(
        "Sweep n=%s finished: %s checked, %s failures, %.3fs", n, report.total, len(report.failures), report.elapsed
    )
    return report


def verify_random(
    n: int,
    samples: int,
    seed: int,
    properties: str | Iterable[str] = (Check.LEMMA,),
    *,
    jobs: int | None = None,
) -> SweepReport:
    """Run the checks on ``samples`` uniform n-cycles drawn with ``random.Random(seed)`` (MT19937)."""
    if n < 2 or samples < 1:
        raise InvalidPermutationError(f"random sweeps need n ≥ 2 and samples ≥ 1, got n={n}, samples={samples}")
    checks = tuple(c.value for c in parse_checks(properties))
    workers = _resolve_jobs(jobs)
    logger.info("Random sweep n=%s samples=%s seed=%s properties=%s", n, samples, seed, ",".join(checks))
    started = time.perf_counter()
    rng = random.Random(seed)
    orders = [random_cyclic(n, rng).cycle_order for _ in range(samples)]
    size = -(-samples // workers)
    arguments = [(n, orders[start : start + size], checks) for start in range(0, samples, size)]
    parts = _run_chunks(sweep_orders, arguments, workers)
    report = _combine(
        n, checks, parts, mode="random", elapsed=time.perf_counter() - started, seed=seed, samples=samples
    )
    logger.info("Random sweep n=%s finished: %s failures, %.3fs", n, len(report.failures), report.elapsed)
    return report


def sequence_histogram(n: int, *, cap: int | None = None, jobs: int | None = None) -> dict[str, int]:
    """Count of every realized sorted characteristic sequence over the n-cycles.

    Raises ``LemmaViolationError`` if any realized sequence breaks the bound.
    """
    report = verify_all(n, (), cap=cap, jobs=jobs)
    if report.failures:
        first = report.failures[0]
        cycle = " ".join(map(str, first.cycle_order))
        raise LemmaViolationError(f"{len(report.failures)} {n}-cycles break the bound; first ({cycle}): {first.detail}")
    return report.histogram
