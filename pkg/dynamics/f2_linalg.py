"""Linear algebra over GF(2) for transition matrices.

Rows are Python ints used as bitsets: bit (c − 1) of ``rows[r − 1]`` is the entry (r, c).
Public indices are 1-based like the rest of the app. Polynomials are bitsets too:
bit j is the coefficient of λ^j.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .conv_dynamics import DiscreteMap, markov_graph
from .exceptions import DimensionMismatchError, InvalidPermutationError, NoDiagonalError
from .perm_core import AnyPermutation, as_cyclic

MAX_DIM = 63
COFACTOR_MAX_DIM = 20


def _clmul(a: int, b: int) -> int:
    """Carry-less product, i.e. multiplication in GF(2)[λ]."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    quotient = 0
    width = b.bit_length()
    while a.bit_length() >= width:
        shift = a.bit_length() - width
        quotient |= 1 << shift
        a ^= b << shift
    return quotient, a


def gf2_rank(rows: Sequence[int], width: int) -> int:
    """Rank over GF(2) via Gaussian elimination on bitset rows."""
    work = list(rows)
    rank = 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(work)) if (work[r] >> col) & 1), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


# ---------------------------------------------------------------------------
# F2Vector / F2Poly
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class F2Vector:
    width: int
    bits: int

    @classmethod
    def unit(cls, width: int, j: int) -> F2Vector:
        return cls(width, 1 << (j - 1))

    @classmethod
    def interval(cls, width: int, a: int, b: int) -> F2Vector:
        """Indicator of the A-vertices covering the closed interval between a and b: e_min + … + e_{max−1}."""
        lo, hi = min(a, b), max(a, b)
        return cls(width, sum(1 << (j - 1) for j in range(lo, hi)))

    def component(self, j: int) -> int:
        return (self.bits >> (j - 1)) & 1

    def support(self) -> tuple[int, ...]:
        return tuple(j for j in range(1, self.width + 1) if self.component(j))

    def __str__(self) -> str:
        return "".join(str(self.component(j)) for j in range(1, self.width + 1))


@dataclass(frozen=True, slots=True)
class F2Poly:
    coefficients: int

    @classmethod
    def from_terms(cls, exponents: Iterable[int]) -> F2Poly:
        bits = 0
        for e in exponents:
            bits ^= 1 << e
        return cls(bits)

    @classmethod
    def all_ones(cls, degree: int) -> F2Poly:
        """1 + λ + … + λ^degree."""
        return cls((1 << (degree + 1)) - 1)

    @property
    def degree(self) -> int:
        return self.coefficients.bit_length() - 1

    def coefficient(self, j: int) -> int:
        return (self.coefficients >> j) & 1

    def __add__(self, other: F2Poly) -> F2Poly:
        return F2Poly(self.coefficients ^ other.coefficients)

    def __mul__(self, other: F2Poly) -> F2Poly:
        return F2Poly(_clmul(self.coefficients, other.coefficients))

    def __divmod__(self, other: F2Poly) -> tuple[F2Poly, F2Poly]:
        q, r = _poly_divmod(self.coefficients, other.coefficients)
        return F2Poly(q), F2Poly(r)

    def __mod__(self, other: F2Poly) -> F2Poly:
        return divmod(self, other)[1]

    def gcd(self, other: F2Poly) -> F2Poly:
        a, b = self.coefficients, other.coefficients
        while b:
            a, b = b, _poly_divmod(a, b)[1]
        return F2Poly(a)

    def lcm(self, other: F2Poly) -> F2Poly:
        if not self.coefficients or not other.coefficients:
            return F2Poly(0)
        quotient, _ = divmod(self * other, self.gcd(other))
        return quotient

    def __call__(self, m: BitMatrix) -> BitMatrix:
        """Evaluate at a square matrix by Horner's rule."""
        result = BitMatrix.zero(m.dim)
        for j in range(self.degree, -1, -1):
            result = mat_mul(result, m)
            if self.coefficient(j):
                result = result + BitMatrix.identity(m.dim)
        return result

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for j in range(self.degree + 1):
            if self.coefficient(j):
                terms.append("1" if j == 0 else "x" if j == 1 else f"x^{j}")
        return "+".join(terms)


# ---------------------------------------------------------------------------
# BitMatrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class BitMatrix:
    dim: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 < self.dim <= MAX_DIM:
            raise DimensionMismatchError(f"dimension {self.dim} outside 1..{MAX_DIM}")
        if len(self.rows) != self.dim or any(row >> self.dim for row in self.rows):
            raise DimensionMismatchError(f"rows do not describe a {self.dim}×{self.dim} matrix")

    @classmethod
    def identity(cls, dim: int) -> BitMatrix:
        return cls(dim, tuple(1 << r for r in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> BitMatrix:
        return cls(dim, (0,) * dim)

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> BitMatrix:
        """Parse rows written as 0/1 characters, e.g. ``["00011", "00010", ...]``."""
        rows = []
        for line in lines:
            line = line.replace(" ", "")
            if len(line) != len(lines) or set(line) - {"0", "1"}:
                raise DimensionMismatchError(f"row {line!r} is not a 0/1 row of width {len(lines)}")
            rows.append(sum(1 << c for c, ch in enumerate(line) if ch == "1"))
        return cls(len(lines), tuple(rows))

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i - 1] >> (j - 1)) & 1

    def to_strings(self) -> list[str]:
        return ["".join(str((row >> c) & 1) for c in range(self.dim)) for row in self.rows]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())

    def __add__(self, other: BitMatrix) -> BitMatrix:
        _check_same_dim(self, other)
        return BitMatrix(self.dim, tuple(a ^ b for a, b in zip(self.rows, other.rows, strict=True)))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)

    def apply(self, vector: F2Vector) -> F2Vector:
        if vector.width != self.dim:
            raise DimensionMismatchError(f"vector of width {vector.width} against a {self.dim}×{self.dim} matrix")
        bits = 0
        for r, row in enumerate(self.rows):
            if (row & vector.bits).bit_count() & 1:
                bits |= 1 << r
        return F2Vector(self.dim, bits)

    def principal(self, indices: Sequence[int]) -> BitMatrix:
        """Principal submatrix on the given 1-based indices (kept in the given order)."""
        rows = []
        for i in indices:
            rows.append(sum(1 << c for c, j in enumerate(indices) if self.entry(i, j)))
        return BitMatrix(len(indices), tuple(rows))

    def det(self) -> int:
        return int(gf2_rank(self.rows, self.dim) == self.dim)


def _check_same_dim(a: BitMatrix, b: BitMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"{a.dim}×{a.dim} and {b.dim}×{b.dim} matrices do not match")


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    _check_same_dim(a, b)
    rows = []
    for row in a.rows:
        acc = 0
        c = 0
        while row:
            if row & 1:
                acc ^= b.rows[c]
            row >>= 1
            c += 1
        rows.append(acc)
    return BitMatrix(a.dim, tuple(rows))


def mat_pow(a: BitMatrix, exponent: int) -> BitMatrix:
    if exponent < 0:
        raise DimensionMismatchError(f"negative exponent {exponent}")
    result = BitMatrix.identity(a.dim)
    base = a
    while exponent:
        if exponent & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        exponent >>= 1
    return result


def adjacency_matrix(g: DiscreteMap) -> BitMatrix:
    """T with T_ij = 1 iff conv g(A_j) ⊇ A_i: columns are source vertices."""
    graph = markov_graph(g)
    rows = [0] * graph.n_vertices
    for source, target in graph.edges():
        rows[target - 1] |= 1 << (source - 1)
    return BitMatrix(graph.n_vertices, tuple(rows))


# ---------------------------------------------------------------------------
# Characteristic and minimal polynomials
# ---------------------------------------------------------------------------


def _hessenberg(m: BitMatrix) -> list[list[int]]:
    """Upper Hessenberg form by GF(2) similarity (row op paired with the inverse column op)."""
    d = m.dim
    h = [[m.entry(r + 1, c + 1) for c in range(d)] for r in range(d)]
    for j in range(d - 2):
        pivot = next((i for i in range(j + 1, d) if h[i][j]), None)
        if pivot is None:
            continue
        if pivot != j + 1:
            h[pivot], h[j + 1] = h[j + 1], h[pivot]
            for row in h:
                row[pivot], row[j + 1] = row[j + 1], row[pivot]
        for r in range(j + 2, d):
            if h[r][j]:
                for c in range(d):
                    h[r][c] ^= h[j + 1][c]
                for row in h:
                    row[j + 1] ^= row[r]
    return h


def _char_poly_hessenberg(m: BitMatrix) -> int:
    h = _hessenberg(m)
    p = [1]
    for k in range(1, m.dim + 1):
        poly = _clmul(0b10 | h[k - 1][k - 1], p[k - 1])
        chain = 1
        for i in range(k - 1, 0, -1):
            chain &= h[i][i - 1]
            if not chain:
                break
            if h[i - 1][k - 1]:
                poly ^= p[i - 1]
        p.append(poly)
    return p[m.dim]


def _char_poly_cofactor(m: BitMatrix) -> int:
    """Row-by-row expansion of det(λI − m), memoized on the set of used columns."""
    if m.dim > COFACTOR_MAX_DIM:
        raise DimensionMismatchError(f"cofactor expansion is limited to dimension {COFACTOR_MAX_DIM}")
    layer = {0: 1}
    for r in range(m.dim):
        row = m.rows[r]
        following: dict[int, int] = {}
        for used, poly in layer.items():
            for c in range(m.dim):
                if used >> c & 1:
                    continue
                entry = (row >> c) & 1
                if r == c:
                    entry |= 0b10
                if entry:
                    key = used | 1 << c
                    following[key] = following.get(key, 0) ^ _clmul(poly, entry)
        layer = following
    return layer.get((1 << m.dim) - 1, 0)


def char_poly(m: BitMatrix, method: str = "hessenberg") -> F2Poly:
    """det(λI − m) over GF(2)."""
    if method == "hessenberg":
        return F2Poly(_char_poly_hessenberg(m))
    if method == "cofactor":
        return F2Poly(_char_poly_cofactor(m))
    raise ValueError(f"unknown char_poly method {method!r}")


def _vector_annihilator(m: BitMatrix, start: int) -> int:
    """Minimal polynomial of a single vector: first linear dependency in its Krylov sequence."""
    basis: dict[int, tuple[int, int]] = {}
    vector = F2Vector(m.dim, start)
    for k in range(m.dim + 1):
        bits, combo = vector.bits, 1 << k
        while bits:
            pivot = bits.bit_length() - 1
            if pivot not in basis:
                break
            base_bits, base_combo = basis[pivot]
            bits ^= base_bits
            combo ^= base_combo
        if not bits:
            return combo
        basis[bits.bit_length() - 1] = (bits, combo)
        vector = m.apply(vector)
    raise AssertionError("a Krylov sequence longer than the dimension must be dependent")


def min_poly(m: BitMatrix) -> F2Poly:
    """LCM of the annihilators of the standard basis vectors."""
    result = F2Poly(1)
    for j in range(m.dim):
        result = result.lcm(F2Poly(_vector_annihilator(m, 1 << j)))
    return result


# ---------------------------------------------------------------------------
# Krylov family
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class KrylovResult:
    alpha: F2Vector
    vectors: tuple[F2Vector, ...]
    rank: int

    @property
    def independent(self) -> bool:
        return self.rank == len(self.vectors)


def krylov_vectors(f: AnyPermutation) -> tuple[F2Vector, ...]:
    """α, Tα, …, T^{n−2}α with α the indicator of the interval between i₁ = 1 and i₂ = f(1)."""
    cyclic = as_cyclic(f)
    if cyclic.n < 2:
        raise InvalidPermutationError("Krylov families need degree ≥ 2")
    t = adjacency_matrix(cyclic)
    order = cyclic.cycle_order
    vector = F2Vector.interval(t.dim, order[0], order[1])
    vectors = []
    for _ in range(t.dim):
        vectors.append(vector)
        vector = t.apply(vector)
    return tuple(vectors)


def krylov_independent(f: AnyPermutation) -> KrylovResult:
    vectors = krylov_vectors(f)
    rank = gf2_rank([v.bits for v in vectors], vectors[0].width)
    return KrylovResult(vectors[0], vectors, rank)


def krylov_intervals(f: AnyPermutation) -> tuple[F2Vector, ...]:
    """Indicators of the intervals between consecutive orbit points i_{m+1}, i_{m+2}, for m = 0..n−2.

    The Krylov family T^m α must equal these term by term.
    """
    cyclic = as_cyclic(f)
    if cyclic.n < 2:
        raise InvalidPermutationError("Krylov families need degree ≥ 2")
    order = cyclic.cycle_order
    return tuple(F2Vector.interval(cyclic.n - 1, order[m], order[m + 1]) for m in range(cyclic.n - 1))


# ---------------------------------------------------------------------------
# Principal minors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class MinorCoefficient:
    bit: int
    witness: tuple[int, ...] | None


def charpoly_coeff_via_minors(m: BitMatrix, i: int) -> MinorCoefficient:
    """Coefficient of λ^{dim−i}: the parity of the number of odd i×i principal minors.

    The witness is the lexicographically first index set whose minor is odd.
    """
    if not 1 <= i <= m.dim:
        raise DimensionMismatchError(f"minor size {i} outside 1..{m.dim}")
    bit = 0
    witness = None
    for indices in itertools.combinations(range(1, m.dim + 1), i):
        if m.principal(indices).det():
            bit ^= 1
            if witness is None:
                witness = indices
    return MinorCoefficient(bit, witness if bit else None)


def cycles_from_minor(m: BitMatrix, index_set: Iterable[int]) -> list[tuple[int, ...]]:
    """Directed cycles of the Markov graph read off an all-ones diagonal of a principal minor.

    Finds σ on index_set with m[σ(v), v] = 1 (depth-first, vertices and rows ascending),
    then splits σ into cycles v → σ(v) → …, each starting at its smallest vertex.
    """
    vertices = sorted(index_set)
    sigma: dict[int, int] = {}

    def assign(position: int, used: frozenset[int]) -> bool:
        if position == len(vertices):
            return True
        v = vertices[position]
        for row in vertices:
            if row not in used and m.entry(row, v):
                sigma[v] = row
                if assign(position + 1, used | {row}):
                    return True
        return False

    if not assign(0, frozenset()):
        raise NoDiagonalError(f"no all-ones diagonal on indices {vertices}")
    cycles = []
    seen: set[int] = set()
    for v in vertices:
        if v in seen:
            continue
        cycle = [v]
        seen.add(v)
        w = sigma[v]
        while w != v:
            cycle.append(w)
            seen.add(w)
            w = sigma[w]
        cycles.append(tuple(cycle))
    return cycles
