"""Tests for dynamics.perm_core."""

import math
import random

import pytest

from dynamics.exceptions import InvalidPermutationError, NotCyclicError
from dynamics.perm_core import (
    CyclicPermutation,
    Permutation,
    as_cyclic,
    enumerate_cyclic,
    from_cycle_notation,
    from_images,
    identity,
    is_cyclic,
    parse_permutation,
    power,
    random_cyclic,
    rotation,
    stefan,
)

SIX_CYCLE = (1, 3, 6, 2, 4, 5)


def describe_from_cycle_notation():
    def it_builds_the_image_table():
        f = from_cycle_notation(SIX_CYCLE)
        assert f.images == (3, 4, 6, 5, 1, 2)

    def it_handles_the_one_cycle():
        f = from_cycle_notation([1])
        assert f.images == (1,)
        assert f.perm.is_identity()

    def it_rotates_the_cycle_to_start_at_one():
        f = from_cycle_notation([2, 1])
        assert f.images == (2, 1)
        assert f.cycle_order == (1, 2)

    def it_round_trips_through_cycle_order():
        f = from_cycle_notation([4, 5, 1, 3, 6, 2])
        assert from_cycle_notation(f.cycle_order) == f
        assert f.cycle_order == SIX_CYCLE

    def it_rejects_duplicates():
        with pytest.raises(InvalidPermutationError, match="repeats"):
            from_cycle_notation([1, 1, 2])

    def it_rejects_out_of_range_entries():
        with pytest.raises(InvalidPermutationError, match="outside"):
            from_cycle_notation([1, 3])

    def it_rejects_empty_input():
        with pytest.raises(InvalidPermutationError):
            from_cycle_notation([])

    def it_prints_in_cycle_notation():
        f = from_cycle_notation(SIX_CYCLE)
        assert str(f) == "(1 3 6 2 4 5)"
        assert f.notation() == "1 3 6 2 4 5"


def describe_from_images():
    def it_builds_the_non_cyclic_counterexample():
        p = from_images([3, 2, 1])
        assert str(p) == "(1 3)(2)"
        assert p.cycles() == [(1, 3), (2,)]

    def it_builds_the_identity():
        assert from_images([1, 2, 3]).is_identity()

    def it_rejects_non_bijections():
        with pytest.raises(InvalidPermutationError, match="bijection"):
            from_images([2, 2, 1])


def describe_CyclicPermutation():
    def it_rejects_an_inconsistent_cycle_order():
        with pytest.raises(NotCyclicError):
            CyclicPermutation(Permutation((2, 3, 1)), (1, 3, 2))


def describe_is_cyclic():
    def it_accepts_the_six_cycle():
        assert is_cyclic(from_images([3, 4, 6, 5, 1, 2]))

    def it_rejects_the_counterexample():
        assert not is_cyclic(from_images([3, 2, 1]))

    def it_rejects_the_identity_on_three_points():
        assert not is_cyclic(identity(3))

    def it_raises_from_as_cyclic_on_non_cycles():
        with pytest.raises(NotCyclicError, match="not a single 3-cycle"):
            as_cyclic(from_images([3, 2, 1]))


def describe_power():
    def it_returns_the_identity_at_the_order():
        assert power(from_cycle_notation(SIX_CYCLE), 6).is_identity()

    def it_composes_twice():
        assert power(from_cycle_notation(SIX_CYCLE), 2)(1) == 6

    def it_keeps_the_identity_fixed():
        assert power(identity(4), 5).is_identity()

    def it_treats_zero_as_the_identity():
        assert power(from_cycle_notation(SIX_CYCLE), 0) == identity(6)

    def it_rejects_negative_exponents():
        with pytest.raises(InvalidPermutationError):
            power(identity(2), -1)


def describe_rotation():
    def it_shifts_by_one():
        assert rotation(4, 1).cycle_order == (1, 2, 3, 4)

    def it_shifts_by_a_coprime_step():
        assert rotation(5, 2).images == (3, 4, 5, 1, 2)
        assert rotation(5, 2).notation() == "1 3 5 2 4"

    def it_rejects_non_coprime_steps():
        with pytest.raises(InvalidPermutationError, match="gcd"):
            rotation(4, 2)


def describe_stefan():
    def it_follows_the_visiting_order_at_degree_five():
        assert stefan(5).cycle_order == (1, 3, 4, 2, 5)

    def it_degenerates_to_the_three_cycle():
        assert stefan(3).cycle_order == (1, 2, 3)

    def it_follows_the_visiting_order_at_degree_seven():
        assert stefan(7).notation() == "1 4 5 3 6 2 7"

    def it_rejects_even_degrees():
        with pytest.raises(InvalidPermutationError, match="odd"):
            stefan(4)


def describe_enumerate_cyclic():
    def it_lists_both_three_cycles_in_order():
        assert [f.cycle_order for f in enumerate_cyclic(3)] == [(1, 2, 3), (1, 3, 2)]

    def it_yields_twenty_four_five_cycles():
        assert sum(1 for _ in enumerate_cyclic(5)) == 24

    def it_yields_the_identity_for_one_point():
        assert [f.images for f in enumerate_cyclic(1)] == [(1,)]

    def it_restricts_to_a_prefix():
        orders = [f.cycle_order for f in enumerate_cyclic(4, (3,))]
        assert orders == [(1, 3, 2, 4), (1, 3, 4, 2)]

    def it_rejects_a_prefix_that_repeats_one():
        with pytest.raises(InvalidPermutationError):
            list(enumerate_cyclic(4, (1,)))

    @pytest.mark.parametrize("n", range(2, 9))
    def it_yields_distinct_image_tables(n):
        tables = {f.images for f in enumerate_cyclic(n)}
        assert len(tables) == math.factorial(n - 1)

    @pytest.mark.parametrize("n", range(2, 7))
    def it_yields_cycles_of_exact_order_n(n):
        for f in enumerate_cyclic(n):
            assert is_cyclic(f.perm)
            assert power(f, n).is_identity()
            assert not any(power(f, exponent).is_identity() for exponent in range(1, n))


def describe_random_cyclic():
    def it_is_reproducible_for_a_seed():
        first = [random_cyclic(9, random.Random(42)).cycle_order for _ in range(3)]
        second = [random_cyclic(9, random.Random(42)).cycle_order for _ in range(3)]
        assert first == second

    def it_returns_valid_cycles():
        rng = random.Random(7)
        for _ in range(20):
            assert is_cyclic(random_cyclic(12, rng).perm)


def describe_parse_permutation():
    def it_reads_parenthesized_and_bare_cycles_alike():
        assert parse_permutation("(1 3 6 2 4 5)") == parse_permutation("1 3 6 2 4 5")

    def it_reads_image_tables():
        p = parse_permutation("img:3,2,1")
        assert isinstance(p, Permutation)
        assert p.images == (3, 2, 1)

    def it_returns_cyclic_image_tables_as_cycles():
        assert isinstance(parse_permutation("img:2,3,1"), CyclicPermutation)

    def it_reads_several_cycles():
        p = parse_permutation("(1 3)(2)")
        assert p.images == (3, 2, 1)

    def it_rejects_unbalanced_parentheses():
        with pytest.raises(InvalidPermutationError, match="parentheses"):
            parse_permutation("(1 2")

    def it_rejects_non_numbers():
        with pytest.raises(InvalidPermutationError, match="integers"):
            parse_permutation("a b")

    @pytest.mark.parametrize("text", ["(1 3 2) junk", "(1 2)(3", "5 (1 3 2)"])
    def it_rejects_text_outside_a_single_cycle(text):
        with pytest.raises(InvalidPermutationError, match="outside cycles"):
            parse_permutation(text)
