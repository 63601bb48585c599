"""
Exact selection laws.

Every mechanism's selection distribution is computed in rational arithmetic
by exhausting its randomness: all ``k**n`` equiprobable block assignments for
the partition mechanisms (uniform tie-breaks expanded by recursive expectation
over candidate states) and all ``n!`` orders for the permutation mechanism
(counted with a dynamic program over visited vertex sets, so only ``2**n``
prefixes are materialized). On top of the oracle sit the impartiality checker,
symmetrization, the fixed-partition lemma checks and worst-case search.

No floating point is used for probabilities in this module.
"""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from config.settings import DEFAULT_GUARDS
from selection import bounds
from selection.errors import DomainError, SizeGuardError
from selection.gadgets import gadget_family
from selection.graph import (
    Graph,
    GraphClass,
    enumerate_graphs,
    graph_id,
    indegree,
    indegree_from,
    max_indegree,
    relabel,
    replace_out_edges,
)
from selection.mechanisms import (
    CandidateState,
    MechanismKind,
    MechanismSpec,
    _check_blocks,
    challenger_fires,
    prefix_leaders,
)
from selection.rng import BlockAssignment, Prng

logger = logging.getLogger(__name__)

Outcome = Dict[int, Fraction]


def fraction_to_str(value: Fraction) -> str:
    """Encode a rational as ``"num/den"``."""
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class SelectionDistribution:
    """Exact selection probabilities; ``probs[i - 1]`` belongs to vertex ``i``."""
    probs: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.probs):
            raise DomainError("Selection probabilities must be nonnegative")
        if sum(self.probs, Fraction(0)) != 1:
            raise DomainError(f"Selection probabilities sum to {sum(self.probs)}, not 1")

    @classmethod
    def from_outcome(cls, n: int, outcome: Mapping[int, Fraction]) -> 'SelectionDistribution':
        return cls(tuple(Fraction(outcome.get(v, 0)) for v in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.probs)

    def __getitem__(self, vertex: int) -> Fraction:
        if not 1 <= vertex <= self.n:
            raise DomainError(f"Vertex {vertex} outside 1..{self.n}")
        return self.probs[vertex - 1]

    def to_json(self) -> List[str]:
        return [fraction_to_str(p) for p in self.probs]


@dataclass(frozen=True)
class RatioReport:
    """Expected selected degree against the maximum degree of one graph."""
    graph_id: str
    mechanism: MechanismSpec
    expected_degree: Fraction
    delta: int
    ratio: Optional[Fraction]

    def to_json(self) -> dict:
        data = {
            'graph': self.graph_id,
            'mechanism': self.mechanism.to_json(),
            'expected_degree': fraction_to_str(self.expected_degree),
            'delta': self.delta,
            'ratio': None if self.ratio is None else fraction_to_str(self.ratio),
        }
        if self.ratio is None:
            data['note'] = 'delta zero'
        return data


@dataclass
class ImpartialityReport:
    """Outcome of checking one vertex's probability across its outgoing sets."""
    mechanism: MechanismSpec
    vertex: int
    probability: Fraction
    checked: int
    violation: Optional[Tuple[Tuple[int, ...], Fraction, Tuple[int, ...], Fraction]] = None

    @property
    def passed(self) -> bool:
        return self.violation is None

    def to_json(self) -> dict:
        data = {
            'mechanism': self.mechanism.to_json(),
            'vertex': self.vertex,
            'probability': fraction_to_str(self.probability),
            'checked': self.checked,
            'passed': self.passed,
        }
        if self.violation is not None:
            out_a, p_a, out_b, p_b = self.violation
            data['violation'] = {
                'out_a': list(out_a), 'p_a': fraction_to_str(p_a),
                'out_b': list(out_b), 'p_b': fraction_to_str(p_b),
            }
        return data


@dataclass
class WorstCase:
    """Minimum exact ratio over a graph class at fixed n."""
    n: int
    graph_class: GraphClass
    mechanism: MechanismSpec
    ratio: Optional[Fraction]
    graph: Optional[Graph]
    index: Optional[int]
    examined: int

    def to_json(self) -> dict:
        return {
            'n': self.n,
            'class': self.graph_class.value,
            'mechanism': self.mechanism.to_json(),
            'min_ratio': None if self.ratio is None else fraction_to_str(self.ratio),
            'argmin': None if self.graph is None else {
                'id': graph_id(self.graph),
                'index': self.index,
                'edges': [list(e) for e in self.graph.sorted_edges()],
            },
            'examined': self.examined,
        }


@dataclass
class LemmaCheck:
    """First counterexample of an exhaustive lemma check, if any."""
    name: str
    checked: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


# ---------------------------------------------------------------------------
# Guards


def _guards(guards: Optional[Mapping[str, int]]) -> Mapping[str, int]:
    return DEFAULT_GUARDS if guards is None else guards


def oracle_work(n: int, m: MechanismSpec) -> int:
    """Units of work the oracle needs: ``k**n`` assignments or ``n!`` orders."""
    if m.kind is MechanismKind.PERMUTATION:
        return math.factorial(n)
    k = 2 if m.kind is MechanismKind.TWO_PARTITION else m.k
    return k ** n


def check_oracle_guard(n: int, m: MechanismSpec, guards: Optional[Mapping[str, int]] = None) -> None:
    """
    Raises:
        SizeGuardError: If the exact oracle for ``m`` on ``n`` vertices is too large
    """
    limits = _guards(guards)
    if m.kind is MechanismKind.PERMUTATION:
        if n > limits['permutation_n']:
            raise SizeGuardError('permutation_n', limits['permutation_n'], oracle_work(n, m),
                                 f"exact permutation law with n = {n}")
    elif oracle_work(n, m) > limits['partition_assignments']:
        raise SizeGuardError('partition_assignments', limits['partition_assignments'],
                             oracle_work(n, m), f"exact {m.label} law with n = {n}")


# ---------------------------------------------------------------------------
# Oracle


def _accumulate(total: Dict[int, Fraction], outcome: Mapping[int, Fraction], weight: Fraction) -> None:
    for vertex, p in outcome.items():
        total[vertex] = total.get(vertex, Fraction(0)) + weight * p


def scan_distribution(g: Graph, blocks: Sequence[Sequence[int]]) -> Outcome:
    """
    Exact outcome law of ``candidate_scan`` for fixed blocks with uniform ties.

    The initial candidate is uniform over the first block; every firing block
    branches uniformly over its leaders. Branches are merged by memoizing the
    law of the remaining scan per (position, candidate); a candidate's score is
    its indegree from the prefix of its own block, so it is implied by the key.
    """
    _check_blocks(g, blocks)
    prefixes = []
    seen: set = set()
    for block in blocks:
        prefixes.append(frozenset(seen))
        seen.update(block)
    memo: Dict[Tuple[int, Optional[int]], Outcome] = {}

    def rest(j: int, state: CandidateState) -> Outcome:
        key = (j, state.candidate)
        if key in memo:
            return memo[key]
        if j == len(blocks):
            result: Outcome = {state.candidate: Fraction(1)}  # type: ignore[dict-item]
        elif not blocks[j] or not challenger_fires(g, blocks[j], set(prefixes[j]), state):
            result = rest(j + 1, state)
        else:
            leaders, best = prefix_leaders(g, blocks[j], set(prefixes[j]))
            result = {}
            share = Fraction(1, len(leaders))
            for leader in leaders:
                _accumulate(result, rest(j + 1, CandidateState(leader, best)), share)
        memo[key] = result
        return result

    if blocks and blocks[0]:
        total: Outcome = {}
        share = Fraction(1, len(blocks[0]))
        for first in blocks[0]:
            _accumulate(total, rest(1, CandidateState(first, 0)), share)
        return total
    return rest(1, CandidateState())


def _two_partition_outcome(g: Graph, assignment: BlockAssignment) -> Outcome:
    a1, a2 = assignment.blocks()
    if not a2:
        return {v: Fraction(1, g.n) for v in g.vertices}
    leaders, _ = prefix_leaders(g, a2, set(a1))
    return {v: Fraction(1, len(leaders)) for v in leaders}


def _assignments(n: int, k: int) -> Iterable[BlockAssignment]:
    for labels in itertools.product(range(1, k + 1), repeat=n):
        yield BlockAssignment(labels, k)


def _partition_law(g: Graph, m: MechanismSpec) -> Outcome:
    k = 2 if m.kind is MechanismKind.TWO_PARTITION else m.k
    assert k is not None
    total: Outcome = {}
    weight = Fraction(1, k ** g.n)
    for assignment in _assignments(g.n, k):
        if m.kind is MechanismKind.TWO_PARTITION:
            outcome = _two_partition_outcome(g, assignment)
        else:
            outcome = scan_distribution(g, assignment.blocks())
        _accumulate(total, outcome, weight)
    return total


def permutation_winner_counts(g: Graph) -> Dict[int, int]:
    """
    Number of vertex orders after which each vertex is the permutation winner.

    A scan's state after a prefix is (candidate, score); the next step needs
    only that state and the prefix set. Orders are therefore counted per
    (prefix bitmask, candidate, score), processing prefixes by size.
    """
    n = g.n
    in_mask = [0] * (n + 1)
    for u, v in g.edges:
        in_mask[v] |= 1 << (u - 1)

    def count_bits(x: int) -> int:
        return bin(x).count('1')

    layer: Dict[int, Dict[Tuple[int, int], int]] = {}
    for v in range(1, n + 1):
        layer[1 << (v - 1)] = {(v, 0): 1}
    for _ in range(n - 1):
        following: Dict[int, Dict[Tuple[int, int], int]] = {}
        for prefix, states in layer.items():
            for v in range(1, n + 1):
                bit = 1 << (v - 1)
                if prefix & bit:
                    continue
                target = following.setdefault(prefix | bit, {})
                full = count_bits(in_mask[v] & prefix)
                for (candidate, score), ways in states.items():
                    others = prefix & ~(1 << (candidate - 1))
                    if count_bits(in_mask[v] & others) >= score:
                        state = (v, full)
                    else:
                        state = (candidate, score)
                    target[state] = target.get(state, 0) + ways
        layer = following
    counts = {v: 0 for v in range(1, n + 1)}
    for states in layer.values():
        for (candidate, _), ways in states.items():
            counts[candidate] += ways
    return counts


def exact_distribution(
    g: Graph,
    m: MechanismSpec,
    guards: Optional[Mapping[str, int]] = None,
) -> SelectionDistribution:
    """
    Exact selection law of mechanism ``m`` on ``g``.

    Raises:
        SizeGuardError: If the randomness to exhaust exceeds the configured guard
    """
    check_oracle_guard(g.n, m, guards)
    if m.kind is MechanismKind.PERMUTATION:
        counts = permutation_winner_counts(g)
        orders = math.factorial(g.n)
        return SelectionDistribution(tuple(Fraction(counts[v], orders) for v in g.vertices))
    return SelectionDistribution.from_outcome(g.n, _partition_law(g, m))


def expected_degree(d: SelectionDistribution, g: Graph) -> Fraction:
    """Expected indegree of the selected vertex."""
    if d.n != g.n:
        raise DomainError(f"Distribution over {d.n} vertices does not match graph with {g.n}")
    return sum((p * indegree(g, v) for v, p in zip(g.vertices, d.probs)), Fraction(0))


def ratio(g: Graph, m: MechanismSpec, guards: Optional[Mapping[str, int]] = None) -> RatioReport:
    """Exact ratio of expected selected degree to maximum degree; ``None`` when Δ = 0."""
    dist = exact_distribution(g, m, guards)
    expected = expected_degree(dist, g)
    delta = max_indegree(g)
    value = expected / delta if delta > 0 else None
    return RatioReport(graph_id(g), m, expected, delta, value)


# ---------------------------------------------------------------------------
# Impartiality and symmetrization


def _outgoing_sets(g: Graph, i: int) -> List[Tuple[int, ...]]:
    others = [v for v in g.vertices if v != i]
    return [tuple(v for bit, v in enumerate(others) if mask >> bit & 1) for mask in range(2 ** len(others))]


def impartiality_check(
    m: MechanismSpec,
    g: Graph,
    i: int,
    spot_checks: Optional[int] = None,
    seed: int = 0,
    guards: Optional[Mapping[str, int]] = None,
) -> ImpartialityReport:
    """
    Check that vertex ``i``'s exact probability ignores its outgoing edges.

    Exhaustive over all ``2**(n-1)`` outgoing sets when ``spot_checks`` is
    None; otherwise compares the graph's own outgoing set with ``spot_checks``
    seeded random replacements.

    Raises:
        SizeGuardError: Exhaustive mode above the ``impartiality_n`` guard
    """
    limits = _guards(guards)
    if not 1 <= i <= g.n:
        raise DomainError(f"Vertex {i} outside 1..{g.n}")
    if spot_checks is None:
        if g.n > limits['impartiality_n']:
            raise SizeGuardError('impartiality_n', limits['impartiality_n'],
                                 2 ** (g.n - 1) * oracle_work(g.n, m), f"exhaustive impartiality with n = {g.n}")
        candidates = _outgoing_sets(g, i)
    else:
        r = Prng(seed)
        others = [v for v in g.vertices if v != i]
        candidates = [tuple(sorted(g.out_neighbors(i)))]
        for _ in range(spot_checks):
            bits = r.next_u64()
            candidates.append(tuple(v for bit, v in enumerate(others) if bits >> bit & 1))

    reference: Optional[Tuple[Tuple[int, ...], Fraction]] = None
    for checked, targets in enumerate(candidates, 1):
        p = exact_distribution(replace_out_edges(g, i, targets), m, guards)[i]
        if reference is None:
            reference = (targets, p)
        elif p != reference[1]:
            logger.warning("impartiality violated for %s at vertex %d", m.label, i)
            return ImpartialityReport(m, i, reference[1], checked, (reference[0], reference[1], targets, p))
    assert reference is not None
    return ImpartialityReport(m, i, reference[1], len(candidates))


def symmetrize(
    m: MechanismSpec,
    g: Graph,
    guards: Optional[Mapping[str, int]] = None,
) -> SelectionDistribution:
    """Average ``m`` over all vertex relabelings: ``(1/n!) sum_pi f(G_pi)[pi(i)]``."""
    limits = _guards(guards)
    if g.n > limits['symmetrize_n']:
        raise SizeGuardError('symmetrize_n', limits['symmetrize_n'],
                             math.factorial(g.n) * oracle_work(g.n, m), f"symmetrization with n = {g.n}")
    total = [Fraction(0)] * g.n
    count = 0
    for perm in itertools.permutations(range(1, g.n + 1)):
        dist = exact_distribution(relabel(g, perm), m, guards)
        for i in g.vertices:
            total[i - 1] += dist[perm[i - 1]]
        count += 1
    return SelectionDistribution(tuple(p / count for p in total))


# ---------------------------------------------------------------------------
# Worst-case search


def _chunk_min(args: Tuple[MechanismSpec, List[Tuple[int, int, Tuple[Tuple[int, int], ...]]], Optional[dict]]):
    m, items, guards = args
    best: Optional[Tuple[Fraction, int]] = None
    for position, n, edges in items:
        g = Graph(n, frozenset(edges))
        if max_indegree(g) == 0:
            continue
        value = ratio(g, m, guards).ratio
        if best is None or (value, position) < best:
            best = (value, position)
    return best


def worst_case_search(
    n: int,
    m: MechanismSpec,
    c: GraphClass = GraphClass.ALL,
    guards: Optional[Mapping[str, int]] = None,
    workers: int = 1,
    chunk_size: int = 256,
) -> WorstCase:
    """
    Exact minimum ratio of ``m`` over all class-``c`` graphs on ``n`` vertices with Δ > 0.

    Ties are broken by enumeration order, so the reported argmin is the first
    attaining graph whatever the number of workers.
    """
    limits = _guards(guards)
    guard_name = {
        GraphClass.ALL: 'enumerate_all_n',
        GraphClass.NO_ABSTENTION: 'enumerate_no_abstention_n',
        GraphClass.OUTDEGREE_EXACTLY_ONE: 'enumerate_functional_n',
    }[c]
    check_oracle_guard(n, m, guards)
    graphs = list(enumerate_graphs(n, c, limit=limits[guard_name]))
    items = [(pos, g.n, tuple(g.sorted_edges())) for pos, g in enumerate(graphs)]
    chunks = [items[start:start + chunk_size] for start in range(0, len(items), chunk_size)]
    plain_guards = None if guards is None else dict(guards)
    jobs = [(m, chunk, plain_guards) for chunk in chunks]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_chunk_min, jobs))
    else:
        results = [_chunk_min(job) for job in jobs]
    found = [r for r in results if r is not None]
    logger.info("searched %d %s graphs on %d vertices for %s", len(graphs), c.value, n, m.label)
    if not found:
        return WorstCase(n, c, m, None, None, None, len(graphs))
    value, position = min(found)
    return WorstCase(n, c, m, value, graphs[position], position, len(graphs))


def gadget_family_min_ratio(
    family: str,
    m: MechanismSpec,
    n: Optional[int] = None,
    guards: Optional[Mapping[str, int]] = None,
) -> Tuple[Fraction, str]:
    """Minimum exact ratio of ``m`` over the gadgets of one figure family, with the attaining gadget."""
    results = []
    for name, g in gadget_family(family, n):
        report = ratio(g, m, guards)
        if report.ratio is not None:
            results.append((report.ratio, name))
    return min(results)


# ---------------------------------------------------------------------------
# Lemma checks


def scan_score_identity(g: Graph, blocks: Sequence[Sequence[int]]) -> int:
    """``max_{j >= 2} max_{i in block_j}`` indegree from the prefix (0 without later members)."""
    best = 0
    prefix: set = set(blocks[0]) if blocks else set()
    for block in blocks[1:]:
        for i in block:
            best = max(best, indegree_from(g, prefix, i))
        prefix.update(block)
    return best


def _max_degree_vertices(g: Graph) -> List[int]:
    delta = max_indegree(g)
    return [v for v in g.vertices if indegree(g, v) == delta]


def _conditional_expected_degree(g: Graph, blocks: Sequence[Sequence[int]]) -> Fraction:
    outcome = scan_distribution(g, blocks)
    return sum((p * indegree(g, v) for v, p in outcome.items()), Fraction(0))


def fixed_partition_check(g: Graph, k: int, guards: Optional[Mapping[str, int]] = None) -> LemmaCheck:
    """
    For every assignment and every maximum-degree vertex ``t``, check
    ``E[X | A = S] >= a + [z > a] (Δ - a)`` where ``a`` is the best prefix
    indegree of any other vertex in blocks 2..k and ``z`` is ``t``'s.
    """
    report = LemmaCheck('fixed_partition')
    check_oracle_guard(g.n, MechanismSpec.k_partition(k), guards)
    delta = max_indegree(g)
    if delta == 0:
        return report
    tops = _max_degree_vertices(g)
    for assignment in _assignments(g.n, k):
        blocks = assignment.blocks()
        expected = _conditional_expected_degree(g, blocks)
        for t in tops:
            a = 0
            for j in range(2, k + 1):
                prefix = set(assignment.prefix(j))
                for i in blocks[j - 1]:
                    if i != t:
                        a = max(a, indegree_from(g, prefix, i))
            z = indegree_from(g, set(assignment.prefix(assignment.block_of[t - 1])), t)
            bound = a + (delta - a if z > a else 0)
            report.checked += 1
            if expected < bound:
                report.failures.append({
                    'graph': graph_id(g), 'blocks': list(assignment.block_of), 'vertex': t,
                    'expected': fraction_to_str(expected), 'bound': bound,
                })
                return report
    return report


def fixed_super_partition_check(g: Graph, k: int, guards: Optional[Mapping[str, int]] = None) -> LemmaCheck:
    """
    For every maximum-degree vertex ``t`` and every assignment of the other
    vertices, check that averaging over the ``k`` placements of ``t`` gives at
    least ``min_j z_j + (k - j)/k (Δ - z_j)``.
    """
    report = LemmaCheck('fixed_super_partition')
    check_oracle_guard(g.n, MechanismSpec.k_partition(k), guards)
    delta = max_indegree(g)
    if delta == 0:
        return report
    for t in _max_degree_vertices(g):
        others = [v for v in g.vertices if v != t]
        for labels in itertools.product(range(1, k + 1), repeat=len(others)):
            placed = dict(zip(others, labels))
            z = [indegree_from(g, {v for v, b in placed.items() if b < j}, t) for j in range(1, k + 1)]
            total = Fraction(0)
            for block in range(1, k + 1):
                placed[t] = block
                assignment = BlockAssignment(tuple(placed[v] for v in g.vertices), k)
                total += _conditional_expected_degree(g, assignment.blocks())
            del placed[t]
            average = total / k
            bound = bounds.super_partition_bound(z, delta)
            report.checked += 1
            if average < bound:
                report.failures.append({
                    'graph': graph_id(g), 'vertex': t, 'others': list(labels),
                    'expected': fraction_to_str(average), 'bound': fraction_to_str(bound),
                })
                return report
    return report


def singleton_conditioning_check(g: Graph, k: int, guards: Optional[Mapping[str, int]] = None) -> bool:
    """
    Conditioned on every block holding at most one vertex, the k-partition
    law equals the permutation law. Requires ``k >= n``.
    """
    if k < g.n:
        raise DomainError(f"Singleton blocks need k >= n, got k = {k}, n = {g.n}")
    total: Outcome = {}
    count = 0
    for labels in itertools.permutations(range(1, k + 1), g.n):
        _accumulate(total, scan_distribution(g, BlockAssignment(labels, k).blocks()), Fraction(1))
        count += 1
    conditioned = SelectionDistribution.from_outcome(g.n, {v: p / count for v, p in total.items()})
    return conditioned == exact_distribution(g, MechanismSpec.permutation(), guards)
