"""Covering systems of intervals in exact rational arithmetic, and the pipeline down to a periodic point.

The chain is: minimalize → orbit closure → discretize (set-valued map on grid pieces) →
reduce to a cyclic permutation → witness → exact periodic-point search. The discrete stages only
produce hints; the periodic point is always verified against the original map with Fractions.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from django.conf import settings

from .conv_dynamics import IndexInterval, characteristic_numbers, conv_chain
from .exceptions import (
    CoveringViolationError,
    DiscretizationError,
    DynamicsError,
    InvalidSystemError,
    LemmaViolationError,
    OrbitClosureError,
    OutOfDomainError,
    PeriodicPointNotFoundError,
    PieceCountExceededError,
    PipelineStageError,
    ReductionError,
)
from .perm_core import AnyPermutation, CyclicPermutation, Permutation, as_cyclic

logger = logging.getLogger(__name__)

DEFAULT_PIECE_CAP = 1_000_000
DEFAULT_ORBIT_NMAX = 64
DELTA_FRACTION = Fraction(1, 1000)

Interval = tuple[Fraction, Fraction]


def parse_rational(value: object) -> Fraction:
    """Read an exact rational from "p/q", "p" or an int. Floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidSystemError(f"{value!r} is not an exact rational; write it as a \"p/q\" string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidSystemError(f"cannot read a rational from {value!r}") from exc
    raise InvalidSystemError(f"cannot read a rational from {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value)


# ---------------------------------------------------------------------------
# PiecewiseLinearMap
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PiecewiseLinearMap:
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) < 2 or len(self.breakpoints) != len(self.values):
            raise InvalidSystemError(
                "a piecewise-linear map needs at least two breakpoints and one value per breakpoint"
            )
        if any(b <= a for a, b in itertools.pairwise(self.breakpoints)):
            raise InvalidSystemError(f"breakpoints must strictly increase: {[str(x) for x in self.breakpoints]}")

    @classmethod
    def from_points(cls, breakpoints: Iterable[object], values: Iterable[object]) -> PiecewiseLinearMap:
        return cls(tuple(map(parse_rational, breakpoints)), tuple(map(parse_rational, values)))

    @property
    def domain(self) -> Interval:
        return self.breakpoints[0], self.breakpoints[-1]

    def in_domain(self, x: Fraction) -> bool:
        return self.breakpoints[0] <= x <= self.breakpoints[-1]

    def __call__(self, x: Fraction) -> Fraction:
        return evaluate(self, x)

    def to_dict(self) -> dict[str, list[str]]:
        return {
            "breakpoints": [format_rational(x) for x in self.breakpoints],
            "values": [format_rational(y) for y in self.values],
        }


def evaluate(f: PiecewiseLinearMap, x: Fraction) -> Fraction:
    """Exact linear interpolation on the piece containing x."""
    if not f.in_domain(x):
        lo, hi = f.domain
        raise OutOfDomainError(f"{x} lies outside the domain [{lo}, {hi}]")
    t = bisect.bisect_right(f.breakpoints, x) - 1
    if t == len(f.breakpoints) - 1:
        return f.values[-1]
    x0, x1 = f.breakpoints[t], f.breakpoints[t + 1]
    y0, y1 = f.values[t], f.values[t + 1]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _points_on(f: PiecewiseLinearMap, a: Fraction, b: Fraction) -> list[Fraction]:
    """a, the breakpoints strictly inside (a, b), and b."""
    return [a, *(x for x in f.breakpoints if a < x < b), b]


def image_of_interval(f: PiecewiseLinearMap, a: Fraction, b: Fraction) -> Interval:
    """Exact [min, max] of f over [a, b]; extrema sit at a, b or an interior breakpoint."""
    if a > b:
        raise InvalidSystemError(f"[{a}, {b}] is not an interval")
    if not (f.in_domain(a) and f.in_domain(b)):
        raise OutOfDomainError(f"[{a}, {b}] is not inside the domain [{f.domain[0]}, {f.domain[1]}]")
    values = [evaluate(f, x) for x in _points_on(f, a, b)]
    return min(values), max(values)


def piecewise_linear_extension(p: AnyPermutation) -> PiecewiseLinearMap:
    """The map of [1, n] to itself interpolating i ↦ p(i)."""
    return PiecewiseLinearMap(
        tuple(Fraction(i) for i in range(1, p.degree + 1)), tuple(Fraction(v) for v in p.images)
    )


# ---------------------------------------------------------------------------
# CoveringSystem
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CoveringSystem:
    intervals: tuple[Interval, ...]
    map: PiecewiseLinearMap

    def __post_init__(self) -> None:
        if not self.intervals:
            raise InvalidSystemError("a covering system needs at least one interval")
        endpoints = [x for interval in self.intervals for x in interval]
        if any(b <= a for a, b in itertools.pairwise(endpoints)):
            raise InvalidSystemError(
                f"intervals must be disjoint, sorted and non-degenerate: {[_show(i) for i in self.intervals]}"
            )
        if not (self.map.in_domain(endpoints[0]) and self.map.in_domain(endpoints[-1])):
            raise InvalidSystemError("every interval must lie inside the domain of the map")

    @property
    def k(self) -> int:
        return len(self.intervals)

    def contains(self, x: Fraction) -> bool:
        return any(a <= x <= b for a, b in self.intervals)

    def endpoints(self) -> frozenset[Fraction]:
        return frozenset(x for interval in self.intervals for x in interval)

    def to_dict(self) -> dict[str, Any]:
        return {
            "intervals": [[format_rational(a), format_rational(b)] for a, b in self.intervals],
            "map": self.map.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CoveringSystem:
        try:
            intervals = tuple((parse_rational(a), parse_rational(b)) for a, b in data["intervals"])
            mapping = PiecewiseLinearMap.from_points(data["map"]["breakpoints"], data["map"]["values"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSystemError):
                raise
            raise InvalidSystemError(f"malformed covering system: {exc}") from exc
        return cls(intervals, mapping)


def _show(interval: Interval) -> str:
    return f"[{interval[0]}, {interval[1]}]"


def is_covering(system: CoveringSystem) -> bool:
    """f(I_1 ∪ … ∪ I_k) ⊇ I_1 ∪ … ∪ I_k, decided on merged exact images."""
    images = sorted(image_of_interval(system.map, a, b) for a, b in system.intervals)
    merged: list[list[Fraction]] = []
    for lo, hi in images:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return all(any(lo <= a and b <= hi for lo, hi in merged) for a, b in system.intervals)


def minimalize(system: CoveringSystem) -> CoveringSystem:
    """Shrink each interval so its endpoints map onto the endpoints of its image.

    The new interval joins the closest argmin/argmax pair among the endpoints and interior
    breakpoints (leftmost on ties). Intervals where f is constant are dropped when other intervals remain.
    """
    f = system.map
    kept = []
    for a, b in system.intervals:
        points = _points_on(f, a, b)
        values = [evaluate(f, x) for x in points]
        lo, hi = min(values), max(values)
        if lo == hi:
            logger.debug("Dropping interval [%s, %s]: f is constant there", a, b)
            continue
        if {values[0], values[-1]} == {lo, hi}:
            kept.append((a, b))
            continue
        argmins = [x for x, y in zip(points, values, strict=True) if y == lo]
        argmaxes = [x for x, y in zip(points, values, strict=True) if y == hi]
        p, q = min(itertools.product(argmins, argmaxes), key=lambda pair: (abs(pair[0] - pair[1]), min(pair)))
        kept.append((min(p, q), max(p, q)))
    if not kept:
        raise CoveringViolationError("f is constant on every interval, so the system cannot cover itself")
    return CoveringSystem(tuple(kept), f)


# ---------------------------------------------------------------------------
# Orbit closure
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class OrbitClosure:
    """M_0 ⊆ M_1 ⊆ … ⊆ M_N and why the sequence stopped ("stabilized" or "delta")."""

    sets: tuple[frozenset[Fraction], ...]
    reason: str

    @property
    def N(self) -> int:  # noqa: N802
        return len(self.sets) - 1

    def grid(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.sets[-2]))


def _distance(x: Fraction, ordered: Sequence[Fraction]) -> Fraction:
    t = bisect.bisect_left(ordered, x)
    candidates = [abs(x - ordered[j]) for j in (t - 1, t) if 0 <= j < len(ordered)]
    return min(candidates)


def _next_set(system: CoveringSystem, current: frozenset[Fraction], fresh: Iterable[Fraction]) -> frozenset[Fraction]:
    """M_{i+1} = M_i ∪ (f(M_i) ∩ ∪I_j); only the points new in M_i need evaluating."""
    images = (evaluate(system.map, x) for x in fresh)
    return current | frozenset(y for y in images if system.contains(y))


def orbit_closure(system: CoveringSystem, delta: Fraction, n_max: int) -> OrbitClosure:
    if delta <= 0 or n_max < 1:
        raise InvalidSystemError(f"orbit closure needs δ > 0 and N_max ≥ 1, got δ={delta}, N_max={n_max}")
    sets = [system.endpoints()]
    fresh: frozenset[Fraction] = sets[0]
    while True:
        following = _next_set(system, sets[-1], fresh)
        previous = sets[-1]
        sets.append(following)
        fresh = following - previous
        if not fresh:
            reason = "stabilized"
            break
        ordered = sorted(previous)
        if all(_distance(x, ordered) < delta for x in fresh):
            reason = "delta"
            break
        if len(sets) - 1 >= n_max:
            raise OrbitClosureError(
                f"orbit closure neither stabilized nor met the δ={delta} criterion within N_max={n_max} steps", sets
            )
    logger.info("Orbit closure stopped at N=%s (%s), %s points", len(sets) - 1, reason, len(sets[-2]))
    return OrbitClosure(tuple(sets), reason)


# ---------------------------------------------------------------------------
# SetValuedMap / discretization
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SetValuedMap:
    n: int
    images: tuple[frozenset[int], ...]
    grid: tuple[Fraction, ...]
    part_of: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.n or len(self.part_of) != self.n:
            raise InvalidSystemError("images and part_of must have one entry per index")
        if any(not 1 <= t <= self.n for image in self.images for t in image):
            raise InvalidSystemError(f"images must be subsets of 1..{self.n}")
        if any(b < a for a, b in itertools.pairwise(self.part_of)):
            raise InvalidSystemError("part_of must be non-decreasing")
        if any(b <= a for a, b in itertools.pairwise(self.grid)):
            raise InvalidSystemError("grid endpoints must strictly increase")
        if len(self.grid) != self.n + len(set(self.part_of)):
            raise InvalidSystemError("grid size does not match the pieces and blocks")

    @property
    def degree(self) -> int:
        return self.n

    def image_set(self, i: int) -> frozenset[int]:
        return self.images[i - 1]

    def pieces(self) -> tuple[Interval, ...]:
        """Endpoints of every index: consecutive grid points inside one block."""
        result = []
        cursor = 0
        for _, group in itertools.groupby(self.part_of):
            count = len(list(group))
            result += [(self.grid[cursor + t], self.grid[cursor + t + 1]) for t in range(count)]
            cursor += count + 1
        return tuple(result)

    def uncovered(self) -> list[int]:
        covered = frozenset().union(*self.images)
        return [t for t in range(1, self.n + 1) if t not in covered]

    def is_covering(self) -> bool:
        return not self.uncovered()

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "images": [sorted(image) for image in self.images],
            "grid": [format_rational(x) for x in self.grid],
            "part_of": list(self.part_of),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SetValuedMap:
        try:
            return cls(
                n=int(data["n"]),
                images=tuple(frozenset(int(t) for t in image) for image in data["images"]),
                grid=tuple(parse_rational(x) for x in data["grid"]),
                part_of=tuple(int(j) for j in data["part_of"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSystemError):
                raise
            raise InvalidSystemError(f"malformed set-valued map: {exc}") from exc


def _snap(y: Fraction, grid: Sequence[Fraction]) -> Fraction:
    """Nearest grid point; the smaller one on ties."""
    t = bisect.bisect_left(grid, y)
    if t < len(grid) and grid[t] == y:
        return y
    below = grid[t - 1] if t > 0 else None
    above = grid[t] if t < len(grid) else None
    if below is None:
        return above  # type: ignore[return-value]
    if above is None or y - below <= above - y:
        return below
    return above


def _grid_map(system: CoveringSystem, grid: Sequence[Fraction]) -> SetValuedMap:
    pieces: list[Interval] = []
    part_of: list[int] = []
    for j, (a, b) in enumerate(system.intervals, start=1):
        inside = [x for x in grid if a <= x <= b]
        for u, v in itertools.pairwise(inside):
            pieces.append((u, v))
            part_of.append(j)
    images = []
    for u, v in pieces:
        p, q = sorted((_snap(evaluate(system.map, u), grid), _snap(evaluate(system.map, v), grid)))
        images.append(frozenset(s for s, (lo, hi) in enumerate(pieces, start=1) if p <= lo and hi <= q))
    return SetValuedMap(len(pieces), tuple(images), tuple(grid), tuple(part_of))


@dataclass(frozen=True, slots=True)
class Discretization:
    svm: SetValuedMap
    closure: OrbitClosure
    level: int
    delta: Fraction


def default_delta(system: CoveringSystem) -> Fraction:
    return min(b - a for a, b in system.intervals) * DELTA_FRACTION


def _resolve_nmax(n_max: int | None) -> int:
    return n_max if n_max is not None else getattr(settings, "PERIODICA_ORBIT_NMAX", DEFAULT_ORBIT_NMAX)


def discretize_system(
    system: CoveringSystem, delta: Fraction | None = None, n_max: int | None = None
) -> Discretization:
    """Grid M_{N−1}, snapped endpoint images, and refinement until the discrete map covers."""
    delta = delta if delta is not None else default_delta(system)
    n_max = _resolve_nmax(n_max)
    closure = orbit_closure(system, delta, n_max)
    sets = list(closure.sets)
    level = len(sets) - 2
    while True:
        svm = _grid_map(system, sorted(sets[level]))
        missing = svm.uncovered()
        if not missing:
            return Discretization(svm, OrbitClosure(tuple(sets), closure.reason), level, delta)
        if level + 1 >= len(sets):
            fresh = sets[level] - (sets[level - 1] if level > 0 else frozenset())
            sets.append(_next_set(system, sets[level], fresh))
        if sets[level + 1] == sets[level] or level + 1 > n_max:
            raise DiscretizationError(f"discrete covering fails on the grid of {len(sets[level])} points", missing)
        level += 1
        logger.info("Discrete covering failed at %s indices; refining the grid to M_%s", len(missing), level)


def discretize(system: CoveringSystem, delta: Fraction | None = None, n_max: int | None = None) -> SetValuedMap:
    return discretize_system(system, delta, n_max).svm


# ---------------------------------------------------------------------------
# Reduction to a cyclic permutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Partition:
    """Cuts i_1 < … < i_{k−1} splitting 1..n into k consecutive blocks."""

    n: int
    cuts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(b <= a for a, b in itertools.pairwise(self.cuts)) or any(not 1 <= c < self.n for c in self.cuts):
            raise InvalidSystemError(f"cuts {list(self.cuts)} are not increasing positions inside 1..{self.n - 1}")

    @property
    def k(self) -> int:
        return len(self.cuts) + 1

    def block_of(self, i: int) -> int:
        return bisect.bisect_left(self.cuts, i) + 1


@dataclass(frozen=True, slots=True)
class Reduction:
    perm: CyclicPermutation
    index_map: tuple[int, ...]
    partition: Partition

    def original(self, i: int) -> int:
        return self.index_map[i - 1]


def _disjointify(images: dict[int, set[int]]) -> bool:
    changed = False
    owner: dict[int, int] = {}
    for i in sorted(images):
        for t in sorted(images[i]):
            if t in owner:
                images[i].discard(t)
                changed = True
            else:
                owner[t] = i
    return changed


def _eliminate(images: dict[int, set[int]]) -> bool:
    empty = [i for i, image in images.items() if not image]
    for i in empty:
        del images[i]
    for image in images.values():
        image.difference_update(empty)
    return bool(empty)


def reduce_to_cyclic(svm: SetValuedMap) -> Reduction:
    """Disjointify and eliminate to a fixpoint, then keep the orbit of the smallest survivor."""
    if not svm.is_covering():
        raise ReductionError(f"set-valued map does not cover; uncovered {svm.uncovered()}")
    images = {i: set(svm.images[i - 1]) for i in range(1, svm.n + 1)}
    while _disjointify(images) | _eliminate(images):
        pass
    if not images:
        raise ReductionError("reduction emptied the index set, which a covering map cannot do")
    survivors = sorted(images)
    target = {i: next(iter(images[i])) for i in survivors}
    orbit = [survivors[0]]
    while target[orbit[-1]] != orbit[0]:
        orbit.append(target[orbit[-1]])
    index_map = tuple(sorted(orbit))
    relabel = {old: new for new, old in enumerate(index_map, start=1)}
    perm = as_cyclic(Permutation(tuple(relabel[target[old]] for old in index_map)))
    blocks = [svm.part_of[old - 1] for old in index_map]
    cuts = tuple(i for i in range(1, len(blocks)) if blocks[i - 1] != blocks[i])
    logger.debug("Reduced %s indices to a %s-cycle with %s blocks", svm.n, perm.n, len(cuts) + 1)
    return Reduction(perm, index_map, Partition(perm.n, cuts))


# ---------------------------------------------------------------------------
# Witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Witness:
    r: int
    s: int
    period: int
    block: int
    provenance: tuple[IndexInterval, ...]

    def replays(self, f: AnyPermutation) -> bool:
        chain = conv_chain(f, (self.r, self.s), self.period)
        return chain == list(self.provenance) and chain[-1].contains((self.r, self.s))

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "s": self.s,
            "period": self.period,
            "block": self.block,
            "provenance": [[step.lo, step.hi] for step in self.provenance],
        }


def find_witness(f: AnyPermutation, part: Partition) -> Witness:
    """A pair {r, s} inside one block with (conv f)^l({r, s}) ⊇ {r, s}, l ≤ k.

    Uses the non-cut position with the smallest characteristic number (smallest position on ties).
    When every position is a cut (k = n, including n = 1) the witness is the singleton {1} with l = n.
    """
    cyclic = as_cyclic(f)
    n = cyclic.n
    if part.n != n:
        raise InvalidSystemError(f"partition of 1..{part.n} does not match degree {n}")
    if part.k == n:
        return Witness(1, 1, n, 1, tuple(conv_chain(cyclic, (1,), n)))
    numbers = characteristic_numbers(cyclic)
    cuts = set(part.cuts)
    candidates = [(m, t) for t, m in enumerate(numbers, start=1) if t not in cuts and m <= part.k]
    if not candidates:
        raise LemmaViolationError(
            f"{cyclic} with cuts {sorted(cuts)}: no non-cut position has m_t ≤ {part.k} (numbers {list(numbers)})"
        )
    m, t = min(candidates)
    return Witness(t, t + 1, m, part.block_of(t), tuple(conv_chain(cyclic, (t, t + 1), m)))


# ---------------------------------------------------------------------------
# Exact periodic points
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PeriodicPoint:
    x0: Fraction
    period: int
    minimal_period: int

    def to_dict(self) -> dict[str, Any]:
        return {"x0": format_rational(self.x0), "period": self.period, "minimal_period": self.minimal_period}


@dataclass(frozen=True, slots=True)
class WitnessHint:
    """The real span of a witness (pieces r..s) and its period bound."""

    lo: Fraction
    hi: Fraction
    period: int


@dataclass(frozen=True, slots=True)
class _Segment:
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    def root(self) -> Fraction | None:
        """Leftmost x with y(x) = x; a segment lying on the diagonal yields its left endpoint."""
        h0, h1 = self.y0 - self.x0, self.y1 - self.x1
        if h0 == 0:
            return self.x0
        if h1 == 0:
            return self.x1
        if (h0 < 0) != (h1 < 0):
            return self.x0 + h0 * (self.x1 - self.x0) / (h0 - h1)
        return None


def iterate(f: PiecewiseLinearMap, x: Fraction, times: int) -> Fraction:
    for _ in range(times):
        x = evaluate(f, x)
    return x


def minimal_period(f: PiecewiseLinearMap, x0: Fraction, period: int) -> int:
    y = x0
    for j in range(1, period + 1):
        y = evaluate(f, y)
        if y == x0:
            return j
    raise PeriodicPointNotFoundError(f"{x0} is not fixed by f^{period}")


def _initial_segments(f: PiecewiseLinearMap, spans: Iterable[Interval]) -> list[_Segment]:
    segments = []
    for lo, hi in spans:
        for a, b in itertools.pairwise(_points_on(f, lo, hi)):
            segments.append(_Segment(a, b, evaluate(f, a), evaluate(f, b)))
    return segments


def _compose(f: PiecewiseLinearMap, segment: _Segment) -> list[_Segment]:
    """Pieces of f ∘ segment, keeping only the x where the segment's value stays in the domain."""
    lo, hi = f.domain
    if segment.y0 == segment.y1:
        if not lo <= segment.y0 <= hi:
            return []
        value = evaluate(f, segment.y0)
        return [_Segment(segment.x0, segment.x1, value, value)]
    y_lo = max(min(segment.y0, segment.y1), lo)
    y_hi = min(max(segment.y0, segment.y1), hi)
    if y_lo > y_hi:
        return []
    slope = (segment.x1 - segment.x0) / (segment.y1 - segment.y0)
    result = []
    for ya, yb in itertools.pairwise(_points_on(f, y_lo, y_hi)) if y_lo < y_hi else [(y_lo, y_hi)]:
        xa = segment.x0 + (ya - segment.y0) * slope
        xb = segment.x0 + (yb - segment.y0) * slope
        if xa <= xb:
            result.append(_Segment(xa, xb, evaluate(f, ya), evaluate(f, yb)))
        else:
            result.append(_Segment(xb, xa, evaluate(f, yb), evaluate(f, ya)))
    return result


def _resolve_piece_cap(piece_cap: int | None) -> int:
    return piece_cap if piece_cap is not None else getattr(settings, "PERIODICA_PIECE_CAP", DEFAULT_PIECE_CAP)


def solve_periodic(
    f: PiecewiseLinearMap, spans: Sequence[Interval], max_period: int, *, piece_cap: int | None = None
) -> PeriodicPoint | None:
    """First x (by period, then left to right) in the spans with f^l(x) = x for some l ≤ max_period."""
    cap = _resolve_piece_cap(piece_cap)
    segments = _initial_segments(f, spans)
    for period in range(1, max_period + 1):
        if period > 1:
            segments = sorted(
                (piece for segment in segments for piece in _compose(f, segment)), key=lambda s: (s.x0, s.x1)
            )
            if len(segments) > cap:
                raise PieceCountExceededError(len(segments), cap, period)
        for segment in segments:
            x0 = segment.root()
            if x0 is not None:
                return PeriodicPoint(x0, period, minimal_period(f, x0, period))
    return None


def find_periodic_point(
    system: CoveringSystem, k: int | None = None, hint: WitnessHint | None = None, *, piece_cap: int | None = None
) -> PeriodicPoint:
    """x0 ∈ ∪I_j with f^l(x0) = x0 for some l ≤ k, searched exactly; the hint's span is tried first."""
    k = k if k is not None else system.k
    if hint is not None:
        found = solve_periodic(system.map, [(hint.lo, hint.hi)], min(hint.period, k), piece_cap=piece_cap)
        if found is not None:
            return found
        logger.info("No periodic point inside the witness span [%s, %s]; searching every interval", hint.lo, hint.hi)
    found = solve_periodic(system.map, system.intervals, k, piece_cap=piece_cap)
    if found is None:
        raise PeriodicPointNotFoundError(f"no periodic point of period ≤ {k} in the intervals")
    return found


def periodic_points_between(p: AnyPermutation, *, piece_cap: int | None = None) -> tuple[PeriodicPoint, ...]:
    """One periodic point of the piecewise-linear extension in each gap [t, t+1], with period ≤ m_t."""
    cyclic = as_cyclic(p)
    extension = piecewise_linear_extension(cyclic)
    points = []
    for t, m in enumerate(characteristic_numbers(cyclic), start=1):
        found = solve_periodic(extension, [(Fraction(t), Fraction(t + 1))], m, piece_cap=piece_cap)
        if found is None:
            raise LemmaViolationError(f"{cyclic}: no point of period ≤ {m} in [{t}, {t + 1}]")
        points.append(found)
    return tuple(points)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PipelineReport:
    system: CoveringSystem
    minimal: CoveringSystem
    discretization: Discretization
    reduction: Reduction
    witness: Witness
    hint: WitnessHint
    point: PeriodicPoint

    @property
    def svm(self) -> SetValuedMap:
        return self.discretization.svm

    def to_dict(self) -> dict[str, Any]:
        closure = self.discretization.closure
        return {
            "system": self.system.to_dict(),
            "minimal_system": self.minimal.to_dict(),
            "orbit_closure": {
                "N": closure.N,
                "reason": closure.reason,
                "sizes": [len(level) for level in closure.sets],
                "delta": format_rational(self.discretization.delta),
                "grid_level": self.discretization.level,
            },
            "set_valued_map": self.svm.to_dict(),
            "reduction": {
                "permutation": self.reduction.perm.notation(),
                "index_map": list(self.reduction.index_map),
                "cuts": list(self.reduction.partition.cuts),
            },
            "witness": {
                **self.witness.to_dict(),
                "span": [format_rational(self.hint.lo), format_rational(self.hint.hi)],
            },
            "periodic_point": self.point.to_dict(),
        }


class _Stage:
    """Context manager relabelling domain errors with the pipeline stage they came from."""

    def __init__(self, label: str) -> None:
        self.label = label

    def __enter__(self) -> None:
        logger.info("Pipeline stage: %s", self.label)

    def __exit__(self, exc_type: type[BaseException] | None, exc: BaseException | None, tb: object) -> None:
        if isinstance(exc, DynamicsError) and not isinstance(exc, PipelineStageError):
            raise PipelineStageError(self.label, exc) from exc


def witness_hint(reduction: Reduction, witness: Witness, svm: SetValuedMap) -> WitnessHint:
    pieces = svm.pieces()
    lo = pieces[reduction.original(witness.r) - 1][0]
    hi = pieces[reduction.original(witness.s) - 1][1]
    return WitnessHint(lo, hi, witness.period)


def run_pipeline(
    system: CoveringSystem,
    delta: Fraction | None = None,
    n_max: int | None = None,
    *,
    piece_cap: int | None = None,
) -> PipelineReport:
    with _Stage("validate"):
        if not is_covering(system):
            raise CoveringViolationError("covering property violated: f(∪I_j) does not contain ∪I_j")
    with _Stage("minimalize"):
        minimal = minimalize(system)
    with _Stage("discretize"):
        discretization = discretize_system(minimal, delta, n_max)
    with _Stage("reduce"):
        reduction = reduce_to_cyclic(discretization.svm)
    with _Stage("witness"):
        witness = find_witness(reduction.perm, reduction.partition)
        hint = witness_hint(reduction, witness, discretization.svm)
    with _Stage("periodic_point"):
        point = find_periodic_point(system, system.k, hint, piece_cap=piece_cap)
    with _Stage("verify"):
        if not system.contains(point.x0) or iterate(system.map, point.x0, point.period) != point.x0:
            raise PeriodicPointNotFoundError(f"{point.x0} fails exact verification against the original map")
        if point.period > system.k:
            raise PeriodicPointNotFoundError(f"period {point.period} exceeds k={system.k}")
    logger.info("Pipeline found x0=%s with period %s", point.x0, point.period)
    return PipelineReport(system, minimal, discretization, reduction, witness, hint, point)


# ---------------------------------------------------------------------------
# Random systems
# ---------------------------------------------------------------------------

MAX_BREAKPOINTS = 12


def random_covering_system(k: int, seed: int) -> CoveringSystem:
    """Seeded covering system on a rational lattice with at most 12 breakpoints.

    Interval j is mapped across interval σ(j) for a random permutation σ, which makes the system cover.
    """
    if not 1 <= k <= MAX_BREAKPOINTS // 2:
        raise InvalidSystemError(f"random systems support 1 ≤ k ≤ {MAX_BREAKPOINTS // 2}, got {k}")
    rng = random.Random(seed)
    span = rng.randint(2 * k - 1, MAX_BREAKPOINTS - 1)
    ends = sorted(rng.sample(range(span + 1), 2 * k))
    intervals = [(ends[2 * j], ends[2 * j + 1]) for j in range(k)]
    sigma = list(range(k))
    rng.shuffle(sigma)
    values = [rng.randint(0, span) for _ in range(span + 1)]
    for j, (a, b) in enumerate(intervals):
        ta, tb = intervals[sigma[j]]
        if rng.random() < 0.5:
            ta, tb = tb, ta
        values[a], values[b] = ta, tb
    scale = rng.randint(1, 5)
    return CoveringSystem(
        tuple((Fraction(a, scale), Fraction(b, scale)) for a, b in intervals),
        PiecewiseLinearMap(
            tuple(Fraction(x, scale) for x in range(span + 1)), tuple(Fraction(y, scale) for y in values)
        ),
    )
