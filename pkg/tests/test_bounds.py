import csv
import io
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selection import bounds
from selection.errors import DomainError, SizeGuardError, UnsupportedBoundError
from selection.graph import GraphClass
from selection.mechanisms import MechanismKind


class TestAlpha2:
    @pytest.mark.parametrize('delta,expected', [
        (1, Fraction(1, 4)),
        (2, Fraction(3, 8)),
        (3, Fraction(3, 8)),
        (4, Fraction(13, 32)),
    ])
    def test_values(self, delta, expected):
        assert bounds.alpha2_sum(delta) == expected
        assert bounds.alpha2_closed(delta) == expected

    def test_sum_equals_closed_form(self):
        for delta in range(1, 21):
            assert bounds.alpha2_sum(delta) == bounds.alpha2_closed(delta)

    def test_approaches_one_half(self):
        assert Fraction(45, 100) < bounds.alpha2_closed(40) < Fraction(1, 2)

    @pytest.mark.parametrize('func', [bounds.alpha2_sum, bounds.alpha2_closed])
    def test_zero_delta(self, func):
        with pytest.raises(DomainError):
            func(0)

    def test_monotone(self):
        report = bounds.check_monotone('alpha2', 20)
        assert report.passed
        assert bounds.alpha2_closed(3) == bounds.alpha2_closed(2)


class TestAlphaK:
    def test_collapses_to_alpha2(self):
        for delta in range(1, 13):
            assert bounds.alpha_k(2, delta) == bounds.alpha2_sum(delta)

    def test_single_edge_value(self):
        for k in range(2, 17):
            assert bounds.alpha_k(k, 1) == Fraction(k - 1, 2 * k)

    def test_delta_two_matches_pair_sum(self):
        for k in range(2, 11):
            assert bounds.alpha_k(k, 2) == bounds.alphak2_pairs(k)

    def test_at_least_guarantee(self):
        for k in (2, 3, 4):
            for delta in range(1, 8):
                assert bounds.alpha_k(k, delta) >= bounds.kpartition_guarantee(k)

    @pytest.mark.parametrize('k', [3, 4, 5])
    def test_monotone(self, k):
        assert bounds.check_monotone('alpha_k', 10, k).passed

    def test_guard(self):
        with pytest.raises(SizeGuardError):
            bounds.alpha_k(10, 30)
        assert bounds.composition_count(10, 30) > 10 ** 6

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            bounds.alpha_k(1, 3)
        with pytest.raises(DomainError):
            bounds.alpha_k(3, 0)
        with pytest.raises(DomainError):
            bounds.check_monotone('alpha_k', 5)
        with pytest.raises(DomainError):
            bounds.check_monotone('beta', 5)


class TestCompositions:
    def test_colex_order(self):
        assert list(bounds.compositions(2, 2)) == [((2, 0), 1), ((1, 1), 2), ((0, 2), 1)]

    @given(st.integers(2, 4), st.integers(0, 6))
    @settings(max_examples=30)
    def test_counts_and_weights(self, k, delta):
        items = list(bounds.compositions(k, delta))
        assert len(items) == bounds.composition_count(k, delta)
        assert len({parts for parts, _ in items}) == len(items)
        assert sum(weight for _, weight in items) == k ** delta
        for parts, weight in items:
            assert sum(parts) == delta
            assert bounds.Composition(parts).multinomial() == weight

    def test_prefix_sums(self):
        assert bounds.Composition((2, 0, 3)).prefix_sums() == [0, 2, 2]

    def test_super_partition_bound(self):
        assert bounds.super_partition_bound([0, 1], 2) == 1
        assert bounds.super_partition_bound([0, 0, 0], 3) == 0


class TestPairs:
    @pytest.mark.parametrize('k,expected', [
        (2, Fraction(3, 8)),
        (3, Fraction(4, 9)),
        (10, Fraction(109, 200)),
    ])
    def test_values(self, k, expected):
        assert bounds.alphak2_pairs(k) == expected

    def test_gap_to_seven_twelfths(self):
        value = bounds.alphak2_pairs(1000)
        assert value == Fraction(2331833, 4000000)
        assert Fraction(7, 12) - value == Fraction(4501, 12000000)
        assert Fraction(7, 12) - value < Fraction(1, 100)

    def test_incremental_sequence(self):
        previous = Fraction(0)
        for k, value in bounds.iter_alphak2_pairs(1000):
            assert value >= previous
            previous = value
            if k <= 40:
                assert value == bounds.alphak2_pairs(k)
        assert previous == bounds.alphak2_pairs(1000)

    def test_rejects_small_k(self):
        with pytest.raises(DomainError):
            bounds.alphak2_pairs(1)


class TestGuarantees:
    def test_kpartition(self):
        assert bounds.kpartition_guarantee(2) == Fraction(1, 4)
        assert bounds.kpartition_guarantee(3) == Fraction(1, 3)
        assert all(bounds.kpartition_guarantee(k) < Fraction(1, 2) for k in range(2, 200))

    def test_singleton_probability(self):
        assert bounds.singleton_partition_probability(3, 3) == Fraction(2, 9)
        assert bounds.singleton_partition_probability(2, 3) == 0

    def test_permutation_limit(self):
        assert bounds.permutation_limit_bound(2, 3) == 0
        values = [bounds.permutation_limit_bound(k, 3) for k in (10, 100, 1000)]
        assert values == sorted(values)
        assert values[-1] > Fraction(49, 100)

    def test_no_abstention(self):
        assert bounds.no_abstention_lower_bound(MechanismKind.TWO_PARTITION) == Fraction(3, 8)
        assert bounds.no_abstention_lower_bound(MechanismKind.K_PARTITION, 3) == Fraction(4, 9)
        assert bounds.no_abstention_lower_bound(MechanismKind.PERMUTATION) == Fraction(7, 12)


class TestUpperBound:
    def test_all_graphs(self):
        assert all(bounds.upper_bound(n, GraphClass.ALL) == Fraction(1, 2) for n in range(2, 10))

    def test_no_abstention(self):
        values = [bounds.upper_bound(n, GraphClass.NO_ABSTENTION) for n in range(3, 8)]
        assert values == [Fraction(3, 4), Fraction(11, 16), Fraction(7, 10), Fraction(17, 24), Fraction(5, 7)]
        assert all(bounds.upper_bound(n, GraphClass.NO_ABSTENTION) < Fraction(3, 4) for n in range(4, 50))

    @pytest.mark.parametrize('n,expected', [
        (3, Fraction(5, 6)),
        (4, Fraction(3, 4)),
        (5, Fraction(3, 4)),
        (6, Fraction(35, 48)),
        (7, Fraction(3, 4)),
        (8, Fraction(47, 64)),
    ])
    def test_outdegree_one(self, n, expected):
        assert bounds.upper_bound(n, GraphClass.OUTDEGREE_EXACTLY_ONE) == expected

    @pytest.mark.parametrize('c', [GraphClass.NO_ABSTENTION, GraphClass.OUTDEGREE_EXACTLY_ONE])
    def test_two_vertices_unsupported(self, c):
        with pytest.raises(UnsupportedBoundError):
            bounds.upper_bound(2, c)

    def test_one_vertex(self):
        with pytest.raises(DomainError):
            bounds.upper_bound(1, GraphClass.ALL)


def test_csv_export():
    text = bounds.alpha2_table([1, 2]).to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == bounds.TABLE_COLUMNS
    assert rows[1][:6] == ['alpha2', '2', '1', 'All', '1', '4']
    assert float(rows[2][6]) == 0.375
    upper = bounds.upper_table(GraphClass.NO_ABSTENTION, [5]).rows[0]
    assert upper.as_csv()[1] == ''
    assert upper.value == Fraction(7, 10)
