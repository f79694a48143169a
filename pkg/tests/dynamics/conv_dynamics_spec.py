"""Tests for dynamics.conv_dynamics."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynamics.conv_dynamics import (
    CharSequence,
    IndexInterval,
    MarkovGraph,
    characteristic_number,
    characteristic_numbers,
    characteristic_sequence,
    check_lemma,
    check_sequence,
    conv_chain,
    conv_image,
    markov_graph,
    min_cycle_length,
    non_concentration_counts,
)
from dynamics.exceptions import InvalidPermutationError, NotCyclicError
from dynamics.interval_systems import SetValuedMap
from dynamics.perm_core import enumerate_cyclic, from_cycle_notation, from_images, random_cyclic, rotation, stefan

SIX_CYCLE = from_cycle_notation([1, 3, 6, 2, 4, 5])


def describe_IndexInterval():
    def it_has_an_empty_state():
        empty = IndexInterval.empty()
        assert empty.is_empty
        assert len(empty) == 0
        assert list(empty) == []
        assert 1 not in empty
        assert str(empty) == "∅"

    def it_spans_the_hull_of_points():
        interval = IndexInterval.hull([5, 2, 3])
        assert (interval.lo, interval.hi) == (2, 5)
        assert list(interval) == [2, 3, 4, 5]
        assert interval.contains([2, 5])
        assert str(interval) == "{2..5}"


def describe_conv_image():
    def it_takes_the_hull_of_the_images():
        assert conv_image(SIX_CYCLE, {2, 3}) == IndexInterval(4, 6)

    def it_maps_a_longer_interval():
        assert conv_image(SIX_CYCLE, {4, 5, 6}) == IndexInterval(1, 5)

    def it_maps_the_empty_set_to_the_empty_interval():
        assert conv_image(SIX_CYCLE, set()).is_empty

    def it_rejects_indices_out_of_range():
        with pytest.raises(InvalidPermutationError):
            conv_image(SIX_CYCLE, {7})

    def it_skips_empty_images_of_set_valued_maps():
        svm = SetValuedMap(
            2, (frozenset(), frozenset({1, 2})), (Fraction(0), Fraction(1), Fraction(2)), (1, 1)
        )
        assert conv_image(svm, {1}).is_empty
        assert conv_image(svm, {1, 2}) == IndexInterval(1, 2)

    @given(seed=st.integers(0, 2**32), n=st.integers(2, 12), data=st.data())
    @settings(max_examples=100)
    def it_is_monotone(seed, n, data):
        f = random_cyclic(n, random.Random(seed))
        big = data.draw(st.sets(st.integers(1, n), min_size=1))
        small = data.draw(st.sets(st.sampled_from(sorted(big))))
        assert conv_image(f, big).contains(conv_image(f, small))

    def it_chains_iterates():
        chain = conv_chain(SIX_CYCLE, (2, 3), 2)
        assert chain == [IndexInterval(2, 3), IndexInterval(4, 6), IndexInterval(1, 5)]


def describe_characteristic_number():
    def it_needs_two_steps_at_position_two():
        assert characteristic_number(SIX_CYCLE, 2) == 2

    def it_returns_one_at_position_four():
        assert characteristic_number(SIX_CYCLE, 4) == 1

    @pytest.mark.parametrize("i", [1, 3, 5])
    def it_needs_three_steps_at_odd_positions(i):
        assert characteristic_number(SIX_CYCLE, i) == 3

    def it_rejects_positions_out_of_range():
        with pytest.raises(InvalidPermutationError):
            characteristic_number(SIX_CYCLE, 6)

    @pytest.mark.parametrize("n", range(2, 8))
    def it_never_exceeds_n_minus_one(n):
        for f in enumerate_cyclic(n):
            assert max(characteristic_numbers(f)) <= n - 1


def describe_characteristic_sequence():
    def it_sorts_the_six_cycle():
        sequence = characteristic_sequence(SIX_CYCLE)
        assert sequence.raw == (3, 2, 3, 1, 3)
        assert sequence.sorted == (1, 2, 3, 3, 3)
        assert sequence.key == "1,2,3,3,3"

    def it_counts_up_for_a_rotation():
        assert characteristic_sequence(rotation(4, 1)).sorted == (1, 2, 3)

    def it_matches_the_stefan_pattern_at_degree_five():
        assert characteristic_sequence(stefan(5)).sorted == (1, 2, 2, 4)

    def it_rejects_degree_one():
        with pytest.raises(InvalidPermutationError):
            characteristic_sequence(from_cycle_notation([1]))

    def describe_closed_forms():
        def it_counts_up_for_every_rotation():
            for n in range(2, 16):
                for m in range(1, n):
                    if math.gcd(m, n) == 1:
                        assert characteristic_sequence(rotation(n, m)).sorted == tuple(range(1, n))

        def it_doubles_even_entries_for_stefan_cycles():
            for degree in range(3, 16, 2):
                half = (degree - 1) // 2
                expected = [1]
                for j in range(1, half):
                    expected += [2 * j, 2 * j]
                expected.append(2 * half)
                assert characteristic_sequence(stefan(degree)).sorted == tuple(expected)


def describe_check_lemma():
    def it_passes_the_six_cycle():
        verdict = check_lemma(SIX_CYCLE)
        assert verdict.passed
        assert str(verdict) == "pass"

    def it_passes_every_five_cycle():
        assert all(check_lemma(f).passed for f in enumerate_cyclic(5))

    def it_refuses_non_cyclic_input():
        with pytest.raises(NotCyclicError):
            check_lemma(from_images([3, 2, 1]))

    def describe_non_cyclic_counterexample():
        def it_has_raw_numbers_two_and_two():
            assert characteristic_numbers(from_images([3, 2, 1])) == (2, 2)

        def it_violates_the_bound_at_the_first_position():
            verdict = check_sequence(CharSequence.from_raw(characteristic_numbers(from_images([3, 2, 1]))))
            assert not verdict.passed
            assert verdict.first_failure == 1
            assert str(verdict) == "violation at i=1: m'_1 = 2 > 1"


def describe_non_concentration_counts():
    def it_counts_gaps_with_small_numbers():
        assert non_concentration_counts(SIX_CYCLE) == (1, 2, 5, 5, 5)

    @pytest.mark.parametrize("n", range(2, 8))
    def it_always_reaches_the_index(n):
        for f in enumerate_cyclic(n):
            counts = non_concentration_counts(f)
            assert all(count >= i for i, count in enumerate(counts, start=1))


def describe_markov_graph():
    def it_gives_a4_edges_to_every_lower_vertex():
        graph = markov_graph(SIX_CYCLE)
        assert graph.n_vertices == 5
        assert graph.out(4) == (1, 2, 3, 4)
        assert graph.edge_count == 9

    def it_builds_the_three_cycle_graph():
        graph = markov_graph(rotation(3, 1))
        assert list(graph.edges()) == [(1, 2), (2, 1), (2, 2)]

    def it_gives_the_transposition_a_self_loop():
        graph = markov_graph(from_cycle_notation([1, 2]))
        assert graph.has_edge(1, 1)
        assert graph.to_dot() == "digraph markov {\n  A1;\n  A1 -> A1;\n}\n"

    def it_gives_every_vertex_an_out_edge_for_cycles():
        for f in enumerate_cyclic(6):
            graph = markov_graph(f)
            assert all(graph.out(v) for v in range(1, graph.n_vertices + 1))

    def it_rejects_degree_one():
        with pytest.raises(InvalidPermutationError):
            markov_graph(from_cycle_notation([1]))


def describe_min_cycle_length():
    def it_finds_the_self_loop():
        assert min_cycle_length(markov_graph(SIX_CYCLE), 4) == 1

    def it_finds_the_two_cycle():
        assert min_cycle_length(markov_graph(SIX_CYCLE), 2) == 2

    def it_returns_none_without_a_cycle():
        assert min_cycle_length(MarkovGraph(2, ((2,), ())), 1) is None

    def it_rejects_unknown_vertices():
        with pytest.raises(InvalidPermutationError):
            min_cycle_length(MarkovGraph(1, ((1,),)), 2)

    @pytest.mark.parametrize("n", range(2, 8))
    def it_agrees_with_characteristic_numbers(n):
        for f in enumerate_cyclic(n):
            graph = markov_graph(f)
            assert characteristic_numbers(f) == tuple(min_cycle_length(graph, v) for v in range(1, n))

    @given(seed=st.integers(0, 2**32), n=st.integers(9, 12))
    @settings(max_examples=50)
    def it_agrees_on_random_larger_cycles(seed, n):
        f = random_cyclic(n, random.Random(seed))
        graph = markov_graph(f)
        assert characteristic_numbers(f) == tuple(min_cycle_length(graph, v) for v in range(1, n))
