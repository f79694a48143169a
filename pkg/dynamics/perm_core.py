"""Permutations of {1..n}, the cyclic ones, and the generators used throughout the app.

Everything is 1-based: ``images[i - 1]`` is f(i) and cycle notation starts at 1.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .exceptions import InvalidPermutationError, NotCyclicError

_CYCLE_GROUP = re.compile(r"\(([^()]*)\)")


# ---------------------------------------------------------------------------
# Permutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n == 0:
            raise InvalidPermutationError("a permutation needs at least one point")
        if sorted(self.images) != list(range(1, n + 1)):
            raise InvalidPermutationError(f"images {list(self.images)} are not a bijection of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def image_set(self, i: int) -> frozenset[int]:
        return frozenset((self.images[i - 1],))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles, each rotated to start at its smallest point, ordered by that point."""
        seen: set[int] = set()
        result = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            point = self(start)
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self(point)
            result.append(tuple(cycle))
        return result

    def is_identity(self) -> bool:
        return all(image == i for i, image in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, cycle)) + ")" for cycle in self.cycles())


# ---------------------------------------------------------------------------
# CyclicPermutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CyclicPermutation:
    perm: Permutation
    cycle_order: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.perm.n
        if len(self.cycle_order) != n or self.cycle_order[0] != 1:
            raise NotCyclicError(f"cycle order {list(self.cycle_order)} does not start at 1 or has the wrong length")
        for j, point in enumerate(self.cycle_order):
            if self.perm(point) != self.cycle_order[(j + 1) % n]:
                raise NotCyclicError(f"{self.perm} does not follow the cycle order {list(self.cycle_order)}")

    @property
    def n(self) -> int:
        return self.perm.n

    @property
    def degree(self) -> int:
        return self.perm.n

    @property
    def images(self) -> tuple[int, ...]:
        return self.perm.images

    def __call__(self, i: int) -> int:
        return self.perm.images[i - 1]

    def image_set(self, i: int) -> frozenset[int]:
        return frozenset((self.perm.images[i - 1],))

    def notation(self) -> str:
        """Cycle entries separated by spaces, the format the CLI prints and parses."""
        return " ".join(map(str, self.cycle_order))

    def __str__(self) -> str:
        return f"({self.notation()})"


AnyPermutation = Permutation | CyclicPermutation


def _plain(p: AnyPermutation) -> Permutation:
    return p.perm if isinstance(p, CyclicPermutation) else p


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def from_images(images: Sequence[int]) -> Permutation:
    return Permutation(tuple(int(x) for x in images))


def from_cycle_notation(seq: Sequence[int]) -> CyclicPermutation:
    """The n-cycle seq[0] → seq[1] → … → seq[-1] → seq[0], canonicalized to start at 1."""
    order = [int(x) for x in seq]
    n = len(order)
    if n == 0:
        raise InvalidPermutationError("empty cycle")
    if len(set(order)) != n:
        raise InvalidPermutationError(f"cycle {order} repeats an entry")
    if min(order) < 1 or max(order) > n:
        raise InvalidPermutationError(f"cycle {order} has entries outside 1..{n}")
    start = order.index(1)
    order = order[start:] + order[:start]
    images = [0] * n
    for j, point in enumerate(order):
        images[point - 1] = order[(j + 1) % n]
    return CyclicPermutation(Permutation(tuple(images)), tuple(order))


def is_cyclic(p: AnyPermutation) -> bool:
    if isinstance(p, CyclicPermutation):
        return True
    length = 1
    point = p(1)
    while point != 1:
        length += 1
        point = p(point)
    return length == p.n


def as_cyclic(p: AnyPermutation) -> CyclicPermutation:
    if isinstance(p, CyclicPermutation):
        return p
    if not is_cyclic(p):
        raise NotCyclicError(f"{p} is not a single {p.n}-cycle")
    order = [1]
    point = p(1)
    while point != 1:
        order.append(point)
        point = p(point)
    return CyclicPermutation(p, tuple(order))


def power(p: AnyPermutation, exponent: int) -> Permutation:
    """The exponent-fold composition; ``power(p, 0)`` is the identity."""
    if exponent < 0:
        raise InvalidPermutationError(f"negative exponent {exponent}")
    base = _plain(p)
    images = list(range(1, base.n + 1))
    for _ in range(exponent):
        images = [base.images[i - 1] for i in images]
    return Permutation(tuple(images))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def rotation(n: int, m: int) -> CyclicPermutation:
    """i ↦ i + m (mod n), shifted back into 1..n."""
    if n < 2 or not 1 <= m < n:
        raise InvalidPermutationError(f"rotation needs n ≥ 2 and 1 ≤ m < n, got n={n}, m={m}")
    if math.gcd(m, n) != 1:
        raise InvalidPermutationError(f"rotation by {m} is not a single cycle on {n} points (gcd {math.gcd(m, n)})")
    return as_cyclic(Permutation(tuple((i + m - 1) % n + 1 for i in range(1, n + 1))))


def stefan(degree: int) -> CyclicPermutation:
    """Stefan cycle of odd degree 2n+1: 1 → n+1 → n+2 → n → n+3 → n−1 → … → 2n → 2 → 2n+1 → 1."""
    if degree < 3 or degree % 2 == 0:
        raise InvalidPermutationError(f"Stefan cycles need an odd degree ≥ 3, got {degree}")
    half = (degree - 1) // 2
    order = [1, half + 1]
    for j in range(1, half):
        order += [half + 1 + j, half + 1 - j]
    order.append(degree)
    return from_cycle_notation(order)


def enumerate_cyclic(n: int, prefix: Sequence[int] = ()) -> Iterator[CyclicPermutation]:
    """Every n-cycle once, lexicographic in cycle order after the leading 1.

    ``prefix`` pins the entries following 1; sweeps use it to split the stream into chunks.
    """
    if n < 1:
        raise InvalidPermutationError(f"degree must be positive, got {n}")
    head = (1, *prefix)
    rest = sorted(set(range(1, n + 1)) - set(head))
    if len(rest) + len(head) != n:
        raise InvalidPermutationError(f"prefix {list(prefix)} is not a valid start of a cycle on {n} points")
    for tail in itertools.permutations(rest):
        yield from_cycle_notation(head + tail)


def random_cyclic(n: int, rng: random.Random) -> CyclicPermutation:
    """Uniform n-cycle: 1 followed by a uniformly shuffled arrangement of 2..n."""
    tail = list(range(2, n + 1))
    rng.shuffle(tail)
    return from_cycle_notation([1, *tail])


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_ints(text: str, separator: str | None) -> list[int]:
    try:
        return [int(token) for token in text.split(separator) if token.strip()]
    except ValueError as exc:
        raise InvalidPermutationError(f"cannot read integers from {text!r}") from exc


def parse_permutation(text: str) -> AnyPermutation:
    """Read "(1 3 6 2 4 5)", "1 3 6 2 4 5", "(1 3)(2)" or "img:3,2,1".

    A cyclic result is returned as ``CyclicPermutation``.
    """
    text = text.strip()
    if text.startswith("img:"):
        perm = from_images(_parse_ints(text[4:], ","))
        return as_cyclic(perm) if is_cyclic(perm) else perm
    groups = _CYCLE_GROUP.findall(text)
    if groups and _CYCLE_GROUP.sub("", text).strip():
        raise InvalidPermutationError(f"unexpected text outside cycles in {text!r}")
    if len(groups) > 1:
        cycles = [_parse_ints(group, None) for group in groups]
        n = sum(len(cycle) for cycle in cycles)
        images = [0] * n
        for cycle in cycles:
            for j, point in enumerate(cycle):
                if not 1 <= point <= n:
                    raise InvalidPermutationError(f"entry {point} outside 1..{n}")
                images[point - 1] = cycle[(j + 1) % len(cycle)]
        perm = from_images(images)
        return as_cyclic(perm) if is_cyclic(perm) else perm
    body = groups[0] if groups else text
    if "(" in body or ")" in body:
        raise InvalidPermutationError(f"unbalanced parentheses in {text!r}")
    return from_cycle_notation(_parse_ints(body, None))
