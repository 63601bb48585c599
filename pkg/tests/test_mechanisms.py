import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from selection.errors import DomainError
from selection.graph import Graph
from selection.mechanisms import (
    MechanismKind,
    MechanismSpec,
    candidate_scan,
    last_wins,
    run_k_partition,
    run_mechanism,
    run_permutation,
    run_two_partition,
    uniform_ties,
)
from selection.rng import Prng


class TestMechanismSpec:
    def test_constructors(self):
        assert MechanismSpec.two_partition().kind is MechanismKind.TWO_PARTITION
        assert MechanismSpec.k_partition(3).k == 3
        assert MechanismSpec.permutation().k is None

    @pytest.mark.parametrize('k', [None, 1, 0])
    def test_bad_k(self, k):
        with pytest.raises(DomainError):
            MechanismSpec(MechanismKind.K_PARTITION, k)

    def test_k_only_for_k_partition(self):
        with pytest.raises(DomainError):
            MechanismSpec(MechanismKind.PERMUTATION, 3)

    def test_from_name(self):
        assert MechanismSpec.from_name('two-partition') == MechanismSpec.two_partition()
        assert MechanismSpec.from_name('k-partition', 4) == MechanismSpec.k_partition(4)
        assert MechanismSpec.from_name('permutation') == MechanismSpec.permutation()
        with pytest.raises(DomainError):
            MechanismSpec.from_name('k-partition')
        with pytest.raises(DomainError):
            MechanismSpec.from_name('lottery')

    def test_json(self):
        assert MechanismSpec.k_partition(3).to_json() == {'kind': 'KPartition', 'k': 3}
        assert MechanismSpec.permutation().to_json() == {'kind': 'Permutation'}


class TestCandidateScan:
    def test_later_block_takes_over(self):
        g = Graph(3, frozenset({(1, 3), (2, 3)}))
        assert candidate_scan(g, [[1], [2], [3]]) == (3, 2)

    def test_candidate_nominations_ignored_when_challenged(self):
        # 3 is nominated only by the candidate 2, so it cannot reach score 1
        g = Graph(3, frozenset({(1, 2), (2, 3)}))
        assert candidate_scan(g, [[1], [2], [3]]) == (2, 1)

    def test_empty_first_block(self):
        g = Graph(2, frozenset({(1, 2)}))
        assert candidate_scan(g, [[], [1, 2]]) == (2, 0)

    def test_empty_blocks_skipped(self):
        g = Graph(3, frozenset({(1, 3), (2, 3)}))
        assert candidate_scan(g, [[1], [], [2], [], [3]]) == (3, 2)

    def test_tie_break_applies_to_leaders(self):
        g = Graph(3, frozenset({(1, 2), (1, 3)}))
        assert candidate_scan(g, [[1], [2, 3]], last_wins) == (3, 1)
        assert candidate_scan(g, [[1], [2, 3]], lambda options: options[0]) == (2, 1)

    @pytest.mark.parametrize('blocks', [
        [[1], [1]],
        [[], []],
        [[1], [4]],
    ])
    def test_invalid_blocks(self, blocks):
        g = Graph(3, frozenset())
        with pytest.raises(DomainError):
            candidate_scan(g, blocks)

    def test_uniform_ties_pick_an_option(self):
        choose = uniform_ties(Prng(3))
        assert all(choose([4, 5, 6]) in (4, 5, 6) for _ in range(20))


class TestRuns:
    def test_single_vertex(self):
        g = Graph.edgeless(1)
        r = Prng(0)
        assert run_two_partition(g, r) == 1
        assert run_k_partition(g, 3, r) == 1
        assert run_permutation(g, r) == 1

    def test_k_partition_needs_two_blocks(self):
        with pytest.raises(DomainError):
            run_k_partition(Graph.edgeless(2), 1, Prng(0))

    def test_permutation_on_star_picks_center_or_late_leaf(self):
        g = Graph(4, frozenset({(2, 1), (3, 1), (4, 1)}))
        winners = {run_permutation(g, Prng(seed)) for seed in range(200)}
        assert 1 in winners

    @pytest.mark.parametrize('spec', [
        MechanismSpec.two_partition(),
        MechanismSpec.k_partition(3),
        MechanismSpec.permutation(),
    ])
    def test_deterministic_by_seed(self, perm_up, spec):
        first = [run_mechanism(perm_up, spec, Prng(seed)) for seed in range(30)]
        again = [run_mechanism(perm_up, spec, Prng(seed)) for seed in range(30)]
        assert first == again
        assert all(1 <= v <= 4 for v in first)


@given(graphs(max_n=5), st.integers(0, 2 ** 64 - 1))
@settings(max_examples=50, deadline=None)
def test_score_never_exceeds_winner_degree(g, seed):
    r = Prng(seed)
    order = list(g.vertices)
    winner, score = candidate_scan(g, [[v] for v in order], uniform_ties(r))
    assert 0 <= score <= len(g.in_neighbors(winner))


@given(graphs(max_n=4))
@settings(max_examples=30, deadline=None)
def test_scan_winner_is_a_block_member(g):
    for order in itertools.islice(itertools.permutations(g.vertices), 6):
        winner, _ = candidate_scan(g, [[v] for v in order])
        assert winner in g.vertices
