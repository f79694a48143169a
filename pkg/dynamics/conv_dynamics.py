"""Discrete convex-hull dynamics on {1..n}: conv-images, characteristic numbers, the Markov graph.

Vertex i of the Markov graph stands for the pair A_i = {i, i+1}. Edges follow
conv f(A_i) ⊇ A_j and are stored as ascending successor tuples.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Protocol

from .exceptions import CharacteristicNumberError, InvalidPermutationError
from .perm_core import AnyPermutation, as_cyclic


class DiscreteMap(Protocol):
    """Anything mapping an index of 1..degree to a set of indices (permutations, set-valued maps)."""

    @property
    def degree(self) -> int: ...

    def image_set(self, i: int) -> frozenset[int]: ...


# ---------------------------------------------------------------------------
# IndexInterval
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class IndexInterval:
    """The integer run {lo, …, hi}; ``lo is None`` marks the empty interval."""

    lo: int | None
    hi: int | None

    @classmethod
    def empty(cls) -> IndexInterval:
        return cls(None, None)

    @classmethod
    def hull(cls, points: Iterable[int]) -> IndexInterval:
        points = list(points)
        if not points:
            return cls.empty()
        return cls(min(points), max(points))

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    def __contains__(self, point: object) -> bool:
        if self.lo is None or self.hi is None or not isinstance(point, int):
            return False
        return self.lo <= point <= self.hi

    def contains(self, other: Iterable[int]) -> bool:
        return all(point in self for point in other)

    def __iter__(self) -> Iterator[int]:
        if self.lo is None or self.hi is None:
            return iter(())
        return iter(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        if self.lo is None or self.hi is None:
            return 0
        return self.hi - self.lo + 1

    def __str__(self) -> str:
        if self.lo is None:
            return "∅"
        return f"{{{self.lo}..{self.hi}}}"


def conv_image(f: DiscreteMap, points: Iterable[int]) -> IndexInterval:
    """Hull of f(points); empty images contribute nothing."""
    union: set[int] = set()
    for i in points:
        if not 1 <= i <= f.degree:
            raise InvalidPermutationError(f"index {i} outside 1..{f.degree}")
        union |= f.image_set(i)
    return IndexInterval.hull(union)


def conv_chain(f: DiscreteMap, start: Iterable[int], steps: int) -> list[IndexInterval]:
    """[conv(start), (conv f)(start), …, (conv f)^steps(start)]."""
    chain = [IndexInterval.hull(start)]
    for _ in range(steps):
        chain.append(conv_image(f, chain[-1]))
    return chain


# ---------------------------------------------------------------------------
# Characteristic numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CharSequence:
    raw: tuple[int, ...]
    sorted: tuple[int, ...]

    @classmethod
    def from_raw(cls, raw: Iterable[int]) -> CharSequence:
        values = tuple(raw)
        return cls(values, tuple(sorted(values)))

    @property
    def key(self) -> str:
        """Comma-joined sorted sequence, the histogram key in reports."""
        return ",".join(map(str, self.sorted))


def characteristic_number(f: AnyPermutation, i: int) -> int:
    """Least m ≥ 1 with (conv∘f)^m({i, i+1}) ⊇ {i, i+1}.

    Iterates over the whole current interval; for n-cycles the answer is at most n − 1.
    """
    n = f.degree
    if not 1 <= i <= n - 1:
        raise InvalidPermutationError(f"position {i} outside 1..{n - 1}")
    images = f.images
    lo, hi = i, i + 1
    for m in range(1, n + 1):
        segment = images[lo - 1 : hi]
        lo, hi = min(segment), max(segment)
        if lo <= i and hi >= i + 1:
            return m
    raise CharacteristicNumberError(f"{f}: conv∘f never returns to {{{i}, {i + 1}}} within {n} steps")


def characteristic_numbers(f: AnyPermutation) -> tuple[int, ...]:
    """Raw m_1..m_{n−1}; accepts any permutation, cyclic or not."""
    return tuple(characteristic_number(f, i) for i in range(1, f.degree))


def characteristic_sequence(f: AnyPermutation) -> CharSequence:
    if f.degree < 2:
        raise InvalidPermutationError("characteristic sequences need degree ≥ 2")
    return CharSequence.from_raw(characteristic_numbers(f))


@dataclass(frozen=True, slots=True)
class LemmaVerdict:
    sequence: CharSequence
    first_failure: int | None = None

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def __str__(self) -> str:
        if self.first_failure is None:
            return "pass"
        i = self.first_failure
        return f"violation at i={i}: m'_{i} = {self.sequence.sorted[i - 1]} > {i}"


def check_sequence(sequence: CharSequence) -> LemmaVerdict:
    """The bound m'_i ≤ i applied to any sequence."""
    for i, value in enumerate(sequence.sorted, start=1):
        if value > i:
            return LemmaVerdict(sequence, i)
    return LemmaVerdict(sequence)


def check_lemma(f: AnyPermutation) -> LemmaVerdict:
    return check_sequence(characteristic_sequence(as_cyclic(f)))


def non_concentration_counts(f: AnyPermutation) -> tuple[int, ...]:
    """For each i, how many of the n − 1 gaps between adjacent orbit points carry m_t ≤ i."""
    raw = characteristic_numbers(as_cyclic(f))
    return tuple(sum(1 for m in raw if m <= i) for i in range(1, len(raw) + 1))


# ---------------------------------------------------------------------------
# MarkovGraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class MarkovGraph:
    n_vertices: int
    successors: tuple[tuple[int, ...], ...]

    def out(self, v: int) -> tuple[int, ...]:
        return self.successors[v - 1]

    def has_edge(self, source: int, target: int) -> bool:
        return target in self.successors[source - 1]

    def edges(self) -> Iterator[tuple[int, int]]:
        for source, targets in enumerate(self.successors, start=1):
            for target in targets:
                yield source, target

    @property
    def edge_count(self) -> int:
        return sum(len(targets) for targets in self.successors)

    def to_dot(self) -> str:
        lines = ["digraph markov {"]
        lines += [f"  A{v};" for v in range(1, self.n_vertices + 1)]
        lines += [f"  A{source} -> A{target};" for source, target in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def markov_graph(f: DiscreteMap) -> MarkovGraph:
    n = f.degree
    if n < 2:
        raise InvalidPermutationError("the Markov graph needs degree ≥ 2")
    successors = []
    for i in range(1, n):
        hull = conv_image(f, (i, i + 1))
        successors.append(tuple(j for j in range(1, n) if j in hull and j + 1 in hull))
    return MarkovGraph(n - 1, tuple(successors))


def min_cycle_length(graph: MarkovGraph, v: int) -> int | None:
    """Length of the shortest directed cycle through v, by breadth-first search from v."""
    if not 1 <= v <= graph.n_vertices:
        raise InvalidPermutationError(f"vertex A{v} not in the graph")
    distance = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in graph.out(u):
            if w == v:
                return distance[u] + 1
            if w not in distance:
                distance[w] = distance[u] + 1
                queue.append(w)
    return None
