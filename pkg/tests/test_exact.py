import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import graphs
from selection import exact
from selection.errors import DomainError, SizeGuardError
from selection.gadgets import cycle_plus, gen_gadget, single_edge
from selection.graph import Graph, GraphClass, enumerate_graphs, max_indegree, relabel
from selection.mechanisms import MechanismSpec, candidate_scan, last_wins

TWO = MechanismSpec.two_partition()
PERM = MechanismSpec.permutation()
ALL_MECHANISMS = [TWO, MechanismSpec.k_partition(2), MechanismSpec.k_partition(3), PERM]


class TestOracle:
    def test_perm_up_gadget(self, perm_up):
        dist = exact.exact_distribution(perm_up, PERM)
        assert dist[2] == Fraction(1, 2)
        assert exact.expected_degree(dist, perm_up) == 2
        assert exact.ratio(perm_up, PERM).ratio == Fraction(2, 3)

    def test_two_partition_single_edge_pair(self, edge_pair):
        dist = exact.exact_distribution(edge_pair, TWO)
        assert dist.probs == (Fraction(1, 2), Fraction(1, 2))
        assert dist.to_json() == ["1/2", "1/2"]
        assert exact.expected_degree(dist, edge_pair) == Fraction(1, 2)

    @pytest.mark.parametrize('n,expected', [
        (2, Fraction(1, 2)),
        (4, Fraction(17, 48)),
        (6, Fraction(307, 960)),
        (8, Fraction(545, 1792)),
    ])
    def test_two_partition_single_edge_family(self, n, expected):
        report = exact.ratio(single_edge(n), TWO)
        assert report.delta == 1
        assert report.ratio == expected

    def test_single_edge_trend(self):
        values = [exact.ratio(single_edge(n), TWO).ratio for n in (2, 4, 6, 8)]
        assert values == sorted(values, reverse=True)
        assert values[-1] < Fraction(35, 100)
        assert all(v > Fraction(1, 4) for v in values)

    def test_permutation_single_edge_pair(self, edge_pair):
        assert exact.exact_distribution(edge_pair, PERM).probs == (Fraction(1, 2), Fraction(1, 2))

    def test_edgeless_ratio_undefined(self):
        report = exact.ratio(Graph.edgeless(3), PERM)
        assert report.ratio is None
        data = report.to_json()
        assert data['ratio'] is None
        assert data['note'] == 'delta zero'

    def test_uniform_on_edgeless(self):
        for m in ALL_MECHANISMS:
            assert exact.exact_distribution(Graph.edgeless(3), m).probs == (Fraction(1, 3),) * 3

    def test_guards(self):
        with pytest.raises(SizeGuardError):
            exact.exact_distribution(Graph.edgeless(10), PERM)
        small = dict(exact.DEFAULT_GUARDS, partition_assignments=8)
        with pytest.raises(SizeGuardError) as info:
            exact.exact_distribution(Graph.edgeless(4), TWO, small)
        assert info.value.required == 16

    def test_distribution_validation(self):
        with pytest.raises(DomainError):
            exact.SelectionDistribution((Fraction(1, 2),))
        with pytest.raises(DomainError):
            exact.SelectionDistribution((Fraction(3, 2), Fraction(-1, 2)))

    def test_expected_degree_size_mismatch(self, perm_up, edge_pair):
        with pytest.raises(DomainError):
            exact.expected_degree(exact.exact_distribution(edge_pair, PERM), perm_up)


class TestCyclePlus:
    @pytest.mark.parametrize('n', [5, 7, 9])
    def test_hub_and_tail(self, n):
        g = cycle_plus(n)
        dist = exact.exact_distribution(g, PERM)
        assert dist[n] == 0
        assert dist[1] >= Fraction(1, 3)
        assert exact.expected_degree(dist, g) >= Fraction(4, 3)

    def test_close_to_four_thirds(self):
        value = exact.expected_degree(exact.exact_distribution(cycle_plus(9), PERM), cycle_plus(9))
        assert value - Fraction(4, 3) < Fraction(1, 20)


def _brute_force_permutation(g):
    counts = {v: 0 for v in g.vertices}
    for order in itertools.permutations(g.vertices):
        winner, _ = candidate_scan(g, [[v] for v in order], last_wins)
        counts[winner] += 1
    total = math.factorial(g.n)
    return tuple(Fraction(counts[v], total) for v in g.vertices)


@given(graphs(max_n=5))
@settings(max_examples=40, deadline=None)
def test_permutation_counts_match_order_enumeration(g):
    assert exact.exact_distribution(g, PERM).probs == _brute_force_permutation(g)


@given(graphs(max_n=4))
@settings(max_examples=40, deadline=None)
def test_scan_distribution_supports_deterministic_run(g):
    blocks = [[v for v in g.vertices if v % 3 == r] for r in (1, 2, 0)]
    if not any(blocks):
        return
    law = exact.scan_distribution(g, blocks)
    assert sum(law.values()) == 1
    winner, _ = candidate_scan(g, blocks, last_wins)
    assert law.get(winner, 0) > 0


def test_k2_partition_equals_two_partition():
    for n in (1, 2, 3):
        for g in enumerate_graphs(n):
            assert exact.exact_distribution(g, MechanismSpec.k_partition(2)) == exact.exact_distribution(g, TWO)


class TestImpartiality:
    @pytest.mark.parametrize('m', ALL_MECHANISMS, ids=lambda m: m.label)
    def test_perm_up(self, perm_up, m):
        for i in perm_up.vertices:
            report = exact.impartiality_check(m, perm_up, i)
            assert report.passed
            assert report.checked == 8

    def test_spot_check_mode(self):
        g = cycle_plus(5)
        report = exact.impartiality_check(PERM, g, 1, spot_checks=10, seed=4)
        assert report.passed
        assert report.checked == 11

    def test_exhaustive_guard(self):
        with pytest.raises(SizeGuardError):
            exact.impartiality_check(PERM, cycle_plus(5), 1)

    def test_report_json(self, perm_up):
        data = exact.impartiality_check(TWO, perm_up, 2).to_json()
        assert data['passed'] is True
        assert 'violation' not in data


@given(graphs(max_n=3))
@settings(max_examples=25, deadline=None)
def test_impartial_on_small_graphs(g):
    for m in ALL_MECHANISMS:
        for i in g.vertices:
            assert exact.impartiality_check(m, g, i).passed


class TestSymmetrize:
    @pytest.mark.parametrize('m', ALL_MECHANISMS, ids=lambda m: m.label)
    @pytest.mark.parametrize('n', [2, 3])
    def test_anonymous_mechanisms_are_fixed_points(self, m, n):
        for g in enumerate_graphs(n):
            assert exact.symmetrize(m, g) == exact.exact_distribution(g, m), g

    @pytest.mark.parametrize('m', ALL_MECHANISMS, ids=lambda m: m.label)
    def test_relabelling_permutes_the_law(self, m):
        for g in enumerate_graphs(3):
            dist = exact.exact_distribution(g, m)
            for perm in itertools.permutations(g.vertices):
                moved = exact.exact_distribution(relabel(g, perm), m)
                assert all(moved[perm[v - 1]] == dist[v] for v in g.vertices), (g, perm)

    def test_guard(self):
        with pytest.raises(SizeGuardError):
            exact.symmetrize(PERM, Graph.edgeless(7))


class TestWorstCase:
    def test_permutation_no_abstention(self):
        result = exact.worst_case_search(3, PERM, GraphClass.NO_ABSTENTION)
        assert Fraction(7, 12) <= result.ratio <= Fraction(3, 4)
        assert result.examined == 27
        assert exact.ratio(result.graph, PERM).ratio == result.ratio

    def test_argmin_is_first_in_order(self):
        result = exact.worst_case_search(2, TWO)
        graphs_in_order = list(enumerate_graphs(2))
        ratios = [exact.ratio(g, TWO).ratio for g in graphs_in_order]
        first = min(i for i, r in enumerate(ratios) if r is not None and r == result.ratio)
        assert result.index == first

    def test_workers_give_same_answer(self):
        serial = exact.worst_case_search(3, TWO, GraphClass.ALL, chunk_size=8)
        parallel = exact.worst_case_search(3, TWO, GraphClass.ALL, workers=2, chunk_size=8)
        assert (serial.ratio, serial.index) == (parallel.ratio, parallel.index)
        assert serial.to_json() == parallel.to_json()

    def test_guard(self):
        with pytest.raises(SizeGuardError):
            exact.worst_case_search(5, PERM, GraphClass.ALL)


class TestLemmas:
    @pytest.mark.parametrize('k', [2, 3])
    def test_fixed_partition_bounds_hold(self, perm_up, k):
        assert exact.fixed_partition_check(perm_up, k).passed
        assert exact.fixed_super_partition_check(perm_up, k).passed

    def test_edgeless_trivially_passes(self):
        assert exact.fixed_partition_check(Graph.edgeless(3), 2).checked == 0

    @pytest.mark.parametrize('k', [4, 5])
    def test_singleton_conditioning(self, perm_up, k):
        assert exact.singleton_conditioning_check(perm_up, k)

    def test_singleton_conditioning_needs_enough_blocks(self, perm_up):
        with pytest.raises(DomainError):
            exact.singleton_conditioning_check(perm_up, 3)

    def test_score_identity(self, perm_up):
        blocks = [[1], [3], [2, 4]]
        _, score = candidate_scan(perm_up, blocks)
        assert score == exact.scan_score_identity(perm_up, blocks)


class TestGadgetFamilies:
    @pytest.mark.parametrize('m', ALL_MECHANISMS, ids=lambda m: m.label)
    def test_upper_pair_forces_one_half(self, m):
        found, name = exact.gadget_family_min_ratio('upper', m)
        assert found == Fraction(1, 2)
        assert name == 'upper_right'

    @pytest.mark.parametrize('m', ALL_MECHANISMS, ids=lambda m: m.label)
    def test_three_vertices(self, m):
        found, _ = exact.gadget_family_min_ratio('oneplus3', m)
        assert found <= Fraction(3, 4)

    def test_five_vertices_permutation(self):
        found, _ = exact.gadget_family_min_ratio('oneplus5', PERM)
        assert found <= Fraction(7, 10)


def test_fraction_strings():
    assert exact.fraction_to_str(Fraction(4, 2)) == "2/1"
    assert exact.fraction_from_str("3/9") == Fraction(1, 3)


def test_max_indegree_used_for_ratio(perm_up):
    report = exact.ratio(perm_up, TWO)
    assert report.delta == max_indegree(perm_up)
    assert report.to_json()['mechanism'] == {'kind': 'TwoPartition'}
