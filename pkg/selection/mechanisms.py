"""
The impartial selection mechanisms.

Three single-run procedures over a nomination graph and an explicit ``Prng``:

* ``run_two_partition`` - random halves ``A1, A2``; a vertex of ``A2`` with the
  most nominations from ``A1`` wins, uniform over ``N`` when ``A2`` is empty.
* ``run_k_partition`` - ``k`` random blocks scanned in order while a candidate
  and its score are carried along.
* ``run_permutation`` - the blocks-of-size-one limit, scanning a uniformly
  random order.

The partition and permutation scans share ``candidate_scan``. A challenger is
compared against the candidate's score ignoring the candidate's own outgoing
edges; when it takes over, its score counts nominations from the full prefix,
candidate included.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Collection, List, Optional, Sequence, Set, Tuple

from selection.errors import DomainError
from selection.graph import Graph, indegree_from
from selection.rng import BlockAssignment, Prng, assign_blocks, shuffle, uniform_below

logger = logging.getLogger(__name__)

__all__ = [
    'BlockAssignment',
    'CandidateState',
    'MechanismKind',
    'MechanismSpec',
    'TieBreak',
    'candidate_scan',
    'last_wins',
    'run_k_partition',
    'run_mechanism',
    'run_permutation',
    'run_two_partition',
    'uniform_ties',
]

TieBreak = Callable[[Sequence[int]], int]


class MechanismKind(Enum):
    TWO_PARTITION = 'TwoPartition'
    K_PARTITION = 'KPartition'
    PERMUTATION = 'Permutation'


@dataclass(frozen=True)
class MechanismSpec:
    """Which mechanism to run; ``k`` is present exactly for the k-partition mechanism."""
    kind: MechanismKind
    k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is MechanismKind.K_PARTITION:
            if self.k is None:
                raise DomainError("The k-partition mechanism needs a block count k")
            if not isinstance(self.k, int) or self.k < 2:
                raise DomainError(f"Block count must be an integer >= 2, got {self.k!r}")
        elif self.k is not None:
            raise DomainError(f"{self.kind.value} takes no block count")

    @classmethod
    def two_partition(cls) -> 'MechanismSpec':
        return cls(MechanismKind.TWO_PARTITION)

    @classmethod
    def k_partition(cls, k: int) -> 'MechanismSpec':
        return cls(MechanismKind.K_PARTITION, k)

    @classmethod
    def permutation(cls) -> 'MechanismSpec':
        return cls(MechanismKind.PERMUTATION)

    @classmethod
    def from_name(cls, name: str, k: Optional[int] = None) -> 'MechanismSpec':
        """Build a spec from a CLI spelling such as ``k-partition``."""
        key = name.strip().lower().replace('_', '-')
        if key in ('two-partition', '2-partition', 'twopartition'):
            return cls(MechanismKind.TWO_PARTITION)
        if key in ('k-partition', 'kpartition'):
            return cls(MechanismKind.K_PARTITION, k)
        if key == 'permutation':
            return cls(MechanismKind.PERMUTATION)
        raise DomainError(f"Unknown mechanism: {name}")

    @property
    def label(self) -> str:
        if self.kind is MechanismKind.TWO_PARTITION:
            return 'two-partition'
        if self.kind is MechanismKind.K_PARTITION:
            return f'k-partition(k={self.k})'
        return 'permutation'

    def to_json(self) -> dict:
        data = {'kind': self.kind.value}
        if self.k is not None:
            data['k'] = self.k
        return data


@dataclass
class CandidateState:
    """Current leader of a scan and the prefix indegree it had when it took the lead."""
    candidate: Optional[int] = None
    score: int = 0


def uniform_ties(r: Prng) -> TieBreak:
    """Tie rule choosing uniformly at random with ``r``."""
    def choose(options: Sequence[int]) -> int:
        return options[uniform_below(r, len(options))]
    return choose


def last_wins(options: Sequence[int]) -> int:
    return options[-1]


def _check_blocks(g: Graph, blocks: Sequence[Collection[int]]) -> None:
    seen: Set[int] = set()
    for block in blocks:
        for v in block:
            if not isinstance(v, int) or not 1 <= v <= g.n:
                raise DomainError(f"Block member {v!r} outside 1..{g.n}")
            if v in seen:
                raise DomainError(f"Vertex {v} appears in more than one block")
            seen.add(v)
    if not seen:
        raise DomainError("Every block is empty")


def challenger_fires(g: Graph, block: Sequence[int], prefix: Set[int], state: CandidateState) -> bool:
    """Whether some member of ``block`` reaches the score without the candidate's nominations."""
    if state.candidate is None:
        others = prefix
    else:
        others = prefix - {state.candidate}
    return max(indegree_from(g, others, i) for i in block) >= state.score


def prefix_leaders(g: Graph, block: Sequence[int], prefix: Set[int]) -> Tuple[List[int], int]:
    """Members of ``block`` with the most nominations from the full prefix, and that count."""
    scores = [(i, indegree_from(g, prefix, i)) for i in block]
    best = max(score for _, score in scores)
    return [i for i, score in scores if score == best], best


def candidate_scan(
    g: Graph,
    blocks: Sequence[Sequence[int]],
    tie_break: TieBreak = last_wins,
) -> Tuple[int, int]:
    """
    Scan ordered blocks carrying a candidate.

    The initial candidate is drawn from the first block with ``tie_break``
    (none when it is empty) with score 0. Each later nonempty block fires when
    its best indegree from the prefix minus the candidate is at least the
    score; the new candidate is then a ``tie_break`` choice among the block's
    leaders by indegree from the full prefix, and that indegree becomes the
    score. Empty blocks are skipped.

    Args:
        g: The nomination graph
        blocks: Disjoint vertex lists in scan order
        tie_break: Rule choosing among equally good vertices

    Returns:
        The final candidate and its score

    Raises:
        DomainError: If blocks overlap, leave 1..n, or are all empty
    """
    _check_blocks(g, blocks)
    state = CandidateState()
    prefix: Set[int] = set()
    if blocks and blocks[0]:
        state.candidate = tie_break(list(blocks[0]))
        prefix.update(blocks[0])
    for block in blocks[1:]:
        if not block:
            continue
        if challenger_fires(g, block, prefix, state):
            leaders, best = prefix_leaders(g, block, prefix)
            state = CandidateState(tie_break(leaders), best)
        prefix.update(block)
    assert state.candidate is not None
    return state.candidate, state.score


def run_two_partition(g: Graph, r: Prng) -> int:
    """One run of the 2-partition mechanism."""
    a1, a2 = assign_blocks(r, g.n, 2).blocks()
    if not a2:
        return uniform_below(r, g.n) + 1
    leaders, _ = prefix_leaders(g, a2, set(a1))
    return leaders[uniform_below(r, len(leaders))]


def run_k_partition(g: Graph, k: int, r: Prng) -> int:
    """One run of the k-partition mechanism with uniform tie-breaking."""
    if k < 2:
        raise DomainError(f"Block count must be at least 2, got {k}")
    assignment = assign_blocks(r, g.n, k)
    winner, score = candidate_scan(g, assignment.blocks(), uniform_ties(r))
    logger.debug("k-partition blocks=%s winner=%d score=%d", assignment.block_of, winner, score)
    return winner


def run_permutation(g: Graph, r: Prng) -> int:
    """One run of the permutation mechanism."""
    order = shuffle(r, list(g.vertices))
    winner, _ = candidate_scan(g, [[v] for v in order], last_wins)
    return winner


def run_mechanism(g: Graph, spec: MechanismSpec, r: Prng) -> int:
    """Dispatch one run of the mechanism described by ``spec``."""
    if spec.kind is MechanismKind.TWO_PARTITION:
        return run_two_partition(g, r)
    if spec.kind is MechanismKind.K_PARTITION:
        assert spec.k is not None
        return run_k_partition(g, spec.k, r)
    return run_permutation(g, r)
