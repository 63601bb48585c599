"""
Portable seeded pseudo-randomness.

Every randomized operation in the toolkit draws from an explicit ``Prng``
handle built on the splitmix64 recurrence, so a 64-bit seed reproduces the
same stream, the same shuffles and the same block assignments on every
platform. Consumption order is fixed: ``assign_blocks`` draws for vertices in
ascending order, ``shuffle`` walks positions from the end.
"""
from dataclasses import dataclass
from typing import Dict, List, MutableSequence, Sequence, Tuple, TypeVar

from selection.errors import DomainError

T = TypeVar('T')

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULTIPLIER_1 = 0xBF58476D1CE4E5B9
MIX_MULTIPLIER_2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """The splitmix64 output finalizer."""
    z = ((z ^ (z >> 30)) * MIX_MULTIPLIER_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MULTIPLIER_2) & MASK64
    return z ^ (z >> 31)


class Prng:
    """splitmix64 generator; single owner, never shared between threads."""

    __slots__ = ('seed', 'state')

    def __init__(self, seed: int):
        if not isinstance(seed, int) or seed < 0 or seed > MASK64:
            raise DomainError(f"Seed must be an integer in [0, 2**64), got {seed!r}")
        self.seed = seed
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def next_float(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits of one draw."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform_below(self, m: int) -> int:
        return uniform_below(self, m)

    def __repr__(self) -> str:
        return f"Prng(seed={self.seed:#x}, state={self.state:#x})"


def next_u64(r: Prng) -> int:
    return r.next_u64()


def uniform_below(r: Prng, m: int) -> int:
    """
    Exactly uniform integer in ``[0, m)``.

    Draws at or above ``floor(2**64 / m) * m`` are rejected and redrawn.
    """
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"uniform_below needs m >= 1, got {m!r}")
    limit = ((MASK64 + 1) // m) * m
    while True:
        x = r.next_u64()
        if x < limit:
            return x % m


def shuffle(r: Prng, items: Sequence[T]) -> List[T]:
    """Fisher-Yates from the end; returns a new list."""
    out: MutableSequence[T] = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = uniform_below(r, i + 1)
        out[i], out[j] = out[j], out[i]
    return list(out)


def derive_seed(seed: int, stream_index: int) -> int:
    """Seed of an independent sub-stream: ``seed XOR index`` passed through one splitmix64 step."""
    return mix64(((seed ^ stream_index) + GOLDEN_GAMMA) & MASK64)


def stream(seed: int, stream_index: int) -> Prng:
    return Prng(derive_seed(seed, stream_index))


@dataclass(frozen=True)
class BlockAssignment:
    """
    Assignment of vertices ``1..n`` to blocks ``1..k``.

    ``block_of[i - 1]`` is the block of vertex ``i``. Blocks may be empty.
    """
    block_of: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise DomainError(f"A block assignment needs k >= 2, got {self.k}")
        bad = [b for b in self.block_of if not 1 <= b <= self.k]
        if bad:
            raise DomainError(f"Block labels {sorted(set(bad))} outside 1..{self.k}")

    @property
    def n(self) -> int:
        return len(self.block_of)

    def blocks(self) -> List[List[int]]:
        """The blocks ``A_1..A_k`` as ascending vertex lists."""
        out: List[List[int]] = [[] for _ in range(self.k)]
        for vertex, block in enumerate(self.block_of, 1):
            out[block - 1].append(vertex)
        return out

    def prefix(self, j: int) -> List[int]:
        """Vertices in blocks before block ``j`` (the union ``A_<j``)."""
        return [v for v, b in enumerate(self.block_of, 1) if b < j]

    def sizes(self) -> Dict[int, int]:
        counts = {b: 0 for b in range(1, self.k + 1)}
        for b in self.block_of:
            counts[b] += 1
        return counts


def assign_blocks(r: Prng, n: int, k: int) -> BlockAssignment:
    """Assign each vertex, in ascending order, to block ``uniform_below(k) + 1``."""
    if k < 2:
        raise DomainError(f"Block count must be at least 2, got {k}")
    if n < 1:
        raise DomainError(f"Vertex count must be positive, got {n}")
    return BlockAssignment(tuple(uniform_below(r, k) + 1 for _ in range(n)), k)
