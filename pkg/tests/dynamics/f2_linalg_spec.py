"""Tests for dynamics.f2_linalg."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynamics.exceptions import DimensionMismatchError, NoDiagonalError, NotCyclicError
from dynamics.f2_linalg import (
    BitMatrix,
    F2Poly,
    F2Vector,
    adjacency_matrix,
    char_poly,
    charpoly_coeff_via_minors,
    cycles_from_minor,
    gf2_rank,
    krylov_independent,
    krylov_intervals,
    krylov_vectors,
    mat_mul,
    mat_pow,
    min_poly,
)
from dynamics.perm_core import enumerate_cyclic, from_cycle_notation, from_images, power, rotation

SIX_CYCLE = from_cycle_notation([1, 3, 6, 2, 4, 5])
SIX_CYCLE_T = BitMatrix.from_strings(["00011", "00010", "10010", "01010", "01100"])


@st.composite
def bit_matrices(draw, max_dim=7):
    dim = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.integers(0, (1 << dim) - 1), min_size=dim, max_size=dim))
    return BitMatrix(dim, tuple(rows))


def describe_F2Vector():
    def it_marks_the_vertices_between_two_points():
        assert str(F2Vector.interval(5, 3, 1)) == "11000"

    def it_lists_its_support():
        assert F2Vector(4, 0b1010).support() == (2, 4)

    def it_builds_unit_vectors():
        assert str(F2Vector.unit(3, 2)) == "010"


def describe_F2Poly():
    def it_prints_terms_in_ascending_order():
        assert str(F2Poly(0b111)) == "1+x+x^2"
        assert str(F2Poly(0)) == "0"

    def it_builds_the_all_ones_polynomial():
        assert F2Poly.all_ones(5).coefficients == 0b111111
        assert F2Poly.all_ones(5).degree == 5

    def it_adds_by_exclusive_or():
        assert F2Poly.from_terms([0, 1]) + F2Poly.from_terms([1, 2]) == F2Poly.from_terms([0, 2])

    def it_squares_without_cross_terms():
        one_plus_x = F2Poly(0b11)
        assert one_plus_x * one_plus_x == F2Poly(0b101)

    def it_divides_with_remainder():
        assert divmod(F2Poly(0b101), F2Poly(0b11)) == (F2Poly(0b11), F2Poly(0))
        assert F2Poly(0b111) % F2Poly(0b11) == F2Poly(1)

    def it_refuses_division_by_zero():
        with pytest.raises(ZeroDivisionError):
            divmod(F2Poly(0b11), F2Poly(0))

    def it_finds_gcd_and_lcm():
        assert F2Poly(0b101).gcd(F2Poly(0b110)) == F2Poly(0b11)
        assert F2Poly(0b101).lcm(F2Poly(0b110)) == F2Poly(0b1010)

    def it_evaluates_at_a_matrix():
        t = BitMatrix.from_strings(["01", "11"])
        assert F2Poly.all_ones(2)(t) == BitMatrix.zero(2)


def describe_BitMatrix():
    def it_reads_and_writes_rows():
        assert SIX_CYCLE_T.to_strings() == ["00011", "00010", "10010", "01010", "01100"]
        assert SIX_CYCLE_T.entry(4, 4) == 1
        assert SIX_CYCLE_T.entry(1, 1) == 0

    def it_rejects_ragged_rows():
        with pytest.raises(DimensionMismatchError):
            BitMatrix.from_strings(["01", "1"])

    def it_rejects_oversized_dimensions():
        with pytest.raises(DimensionMismatchError):
            BitMatrix.identity(64)

    def it_rejects_mismatched_products():
        with pytest.raises(DimensionMismatchError):
            mat_mul(BitMatrix.identity(2), BitMatrix.identity(3))

    def it_multiplies_with_the_at_operator():
        t = BitMatrix.from_strings(["01", "11"])
        assert t @ t == BitMatrix.from_strings(["11", "10"])

    def it_takes_principal_submatrices():
        assert SIX_CYCLE_T.principal([4, 5]).to_strings() == ["10", "00"]

    def it_computes_determinants():
        assert BitMatrix.from_strings(["01", "11"]).det() == 1
        assert BitMatrix.from_strings(["11", "11"]).det() == 0

    def it_ranks_repeated_rows_once():
        assert gf2_rank([0b11, 0b11], 2) == 1


def describe_adjacency_matrix():
    def it_builds_the_six_cycle_matrix():
        assert adjacency_matrix(SIX_CYCLE) == SIX_CYCLE_T

    def it_builds_the_three_cycle_matrix():
        assert adjacency_matrix(rotation(3, 1)).to_strings() == ["01", "11"]

    def it_accepts_non_cyclic_permutations():
        assert adjacency_matrix(from_images([3, 2, 1])) == BitMatrix.from_strings(["01", "10"])

    def it_is_the_identity_for_the_transposition():
        assert adjacency_matrix(from_cycle_notation([1, 2])) == BitMatrix.identity(1)


def describe_mat_pow():
    def it_reaches_the_identity_at_the_cycle_length():
        assert mat_pow(SIX_CYCLE_T, 6) == BitMatrix.identity(5)

    def it_returns_the_identity_for_exponent_zero():
        assert mat_pow(SIX_CYCLE_T, 0) == BitMatrix.identity(5)

    def it_rejects_negative_exponents():
        with pytest.raises(DimensionMismatchError):
            mat_pow(SIX_CYCLE_T, -1)

    @pytest.mark.parametrize("n", range(3, 7))
    def it_matches_the_matrix_of_the_power(n):
        for f in enumerate_cyclic(n):
            t = adjacency_matrix(f)
            for exponent in range(1, n + 1):
                assert mat_pow(t, exponent) == adjacency_matrix(power(f, exponent))


def describe_char_poly():
    def it_is_all_ones_for_the_six_cycle():
        assert str(char_poly(SIX_CYCLE_T)) == "1+x+x^2+x^3+x^4+x^5"

    def it_agrees_between_methods_on_the_six_cycle():
        assert char_poly(SIX_CYCLE_T, method="cofactor") == char_poly(SIX_CYCLE_T)

    def it_rejects_unknown_methods():
        with pytest.raises(ValueError, match="unknown"):
            char_poly(SIX_CYCLE_T, method="leverrier")

    def it_limits_the_cofactor_expansion():
        with pytest.raises(DimensionMismatchError):
            char_poly(BitMatrix.identity(21), method="cofactor")

    @given(bit_matrices())
    @settings(max_examples=200)
    def it_agrees_between_methods(m):
        assert char_poly(m, method="hessenberg") == char_poly(m, method="cofactor")

    @given(bit_matrices())
    @settings(max_examples=100)
    def it_is_annihilated_by_its_own_matrix(m):
        assert char_poly(m)(m) == BitMatrix.zero(m.dim)

    @pytest.mark.parametrize("n", range(2, 8))
    def it_is_all_ones_for_every_cycle(n):
        for f in enumerate_cyclic(n):
            assert char_poly(adjacency_matrix(f)) == F2Poly.all_ones(n - 1)


def describe_min_poly():
    def it_equals_the_char_poly_for_the_three_cycle():
        assert min_poly(adjacency_matrix(rotation(3, 1))) == F2Poly(0b111)

    def it_is_linear_for_the_identity():
        assert min_poly(BitMatrix.identity(4)) == F2Poly(0b11)

    @given(bit_matrices())
    @settings(max_examples=100)
    def it_divides_the_char_poly(m):
        minimal = min_poly(m)
        assert minimal(m) == BitMatrix.zero(m.dim)
        assert char_poly(m) % minimal == F2Poly(0)

    @pytest.mark.parametrize("n", range(2, 8))
    def it_equals_the_char_poly_for_every_cycle(n):
        for f in enumerate_cyclic(n):
            t = adjacency_matrix(f)
            assert min_poly(t) == char_poly(t)


def describe_krylov():
    def it_starts_from_the_first_step_of_the_cycle():
        assert str(krylov_independent(SIX_CYCLE).alpha) == "11000"

    def it_has_n_minus_one_vectors():
        assert len(krylov_vectors(SIX_CYCLE)) == 5

    def it_walks_the_three_cycle():
        assert [str(v) for v in krylov_vectors(rotation(3, 1))] == ["10", "01"]

    def it_refuses_non_cyclic_input():
        with pytest.raises(NotCyclicError):
            krylov_vectors(from_images([3, 2, 1]))

    @pytest.mark.parametrize("n", range(2, 8))
    def it_is_independent_for_every_cycle(n):
        for f in enumerate_cyclic(n):
            result = krylov_independent(f)
            assert result.independent
            assert result.rank == n - 1

    def it_lists_the_gaps_between_consecutive_orbit_points():
        assert [str(v) for v in krylov_intervals(SIX_CYCLE)] == ["11000", "00111", "01111", "01100", "00010"]

    @pytest.mark.parametrize("n", range(2, 8))
    def it_steps_from_one_gap_indicator_to_the_next(n):
        for f in enumerate_cyclic(n):
            assert krylov_vectors(f) == krylov_intervals(f)


def describe_charpoly_coeff_via_minors():
    def it_finds_the_single_odd_diagonal_entry():
        coefficient = charpoly_coeff_via_minors(SIX_CYCLE_T, 1)
        assert coefficient.bit == 1
        assert coefficient.witness == (4,)

    def it_has_no_witness_for_an_even_count():
        coefficient = charpoly_coeff_via_minors(BitMatrix.identity(2), 1)
        assert coefficient.bit == 0
        assert coefficient.witness is None

    def it_rejects_sizes_out_of_range():
        with pytest.raises(DimensionMismatchError):
            charpoly_coeff_via_minors(SIX_CYCLE_T, 6)

    @given(bit_matrices(max_dim=6), st.data())
    @settings(max_examples=100)
    def it_matches_the_char_poly_coefficient(m, data):
        i = data.draw(st.integers(1, m.dim))
        assert charpoly_coeff_via_minors(m, i).bit == char_poly(m).coefficient(m.dim - i)


def describe_cycles_from_minor():
    def it_reads_a_self_loop():
        assert cycles_from_minor(SIX_CYCLE_T, [4]) == [(4,)]

    def it_reads_a_two_cycle():
        assert cycles_from_minor(BitMatrix.from_strings(["01", "11"]), [1, 2]) == [(1, 2)]

    def it_raises_without_a_diagonal():
        with pytest.raises(NoDiagonalError):
            cycles_from_minor(BitMatrix.zero(2), [1])

    def it_splits_into_disjoint_cycles():
        for i in range(1, 6):
            witness = charpoly_coeff_via_minors(SIX_CYCLE_T, i).witness
            cycles = cycles_from_minor(SIX_CYCLE_T, witness)
            assert sorted(v for cycle in cycles for v in cycle) == list(witness)
