from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selection.errors import DomainError
from selection.rng import (
    BlockAssignment,
    Prng,
    assign_blocks,
    derive_seed,
    mix64,
    shuffle,
    stream,
    uniform_below,
)

seeds = st.integers(0, 2 ** 64 - 1)


def test_splitmix64_reference_outputs():
    r = Prng(0)
    assert r.next_u64() == 0xE220A8397B1DCDAF
    assert r.next_u64() == 0x6E789E6AA1B965F4


def test_same_seed_same_stream():
    a, b = Prng(12345), Prng(12345)
    assert [a.next_u64() for _ in range(20)] == [b.next_u64() for _ in range(20)]


def test_different_seeds_differ():
    assert Prng(1).next_u64() != Prng(2).next_u64()


@pytest.mark.parametrize('seed', [-1, 2 ** 64, 1.5])
def test_invalid_seed_rejected(seed):
    with pytest.raises(DomainError):
        Prng(seed)


@given(seeds, st.integers(1, 1000))
@settings(max_examples=50)
def test_uniform_below_in_range(seed, m):
    r = Prng(seed)
    for _ in range(10):
        assert 0 <= uniform_below(r, m) < m


def test_uniform_below_one_is_zero():
    r = Prng(7)
    assert {uniform_below(r, 1) for _ in range(10)} == {0}


def test_uniform_below_zero_rejected():
    with pytest.raises(DomainError):
        uniform_below(Prng(0), 0)


def test_next_float_unit_interval():
    r = Prng(99)
    values = [r.next_float() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in values)


@given(seeds, st.lists(st.integers(), max_size=12))
@settings(max_examples=50)
def test_shuffle_is_permutation(seed, items):
    original = list(items)
    out = shuffle(Prng(seed), items)
    assert sorted(out) == sorted(original)
    assert items == original


def test_shuffle_deterministic():
    assert shuffle(Prng(5), range(10)) == shuffle(Prng(5), range(10))


def test_derive_seed_separates_streams():
    derived = {derive_seed(42, t) for t in range(1000)}
    assert len(derived) == 1000


def test_stream_matches_derived_seed():
    assert stream(3, 4).next_u64() == Prng(derive_seed(3, 4)).next_u64()


def test_mix64_stays_in_64_bits():
    assert 0 <= mix64(2 ** 64 - 1) < 2 ** 64


@given(seeds, st.integers(1, 10), st.integers(2, 6))
@settings(max_examples=50)
def test_assign_blocks_labels(seed, n, k):
    a = assign_blocks(Prng(seed), n, k)
    assert a.n == n
    assert all(1 <= b <= k for b in a.block_of)
    assert sorted(v for block in a.blocks() for v in block) == list(range(1, n + 1))
    assert sum(a.sizes().values()) == n


def test_assign_blocks_deterministic():
    assert assign_blocks(Prng(8), 9, 3) == assign_blocks(Prng(8), 9, 3)


def test_block_assignment_views():
    a = BlockAssignment((2, 1, 2, 3), 3)
    assert a.blocks() == [[2], [1, 3], [4]]
    assert a.prefix(1) == []
    assert a.prefix(3) == [1, 2, 3]
    assert a.sizes() == {1: 1, 2: 2, 3: 1}


def test_block_assignment_rejects_bad_labels():
    with pytest.raises(DomainError):
        BlockAssignment((1, 4), 3)
    with pytest.raises(DomainError):
        BlockAssignment((1, 1), 1)


@pytest.mark.slow
class TestUniformity:
    def test_coin_flips_balanced(self):
        r = Prng(1)
        draws = 10 ** 6
        ones = sum(uniform_below(r, 2) for _ in range(draws))
        assert abs(ones / draws - 0.5) <= 0.005

    def test_every_order_of_three_equally_likely(self):
        r = Prng(1)
        shuffles = 6 * 10 ** 5
        counts = Counter(tuple(shuffle(r, [1, 2, 3])) for _ in range(shuffles))
        assert len(counts) == 6
        for count in counts.values():
            assert abs(count / shuffles - 1 / 6) <= 0.01

    def test_single_vertex_lands_in_first_block_half_the_time(self):
        seeds = 10 ** 5
        first = sum(assign_blocks(Prng(seed), 1, 2).block_of[0] == 1 for seed in range(seeds))
        assert abs(first / seeds - 0.5) <= 0.01
