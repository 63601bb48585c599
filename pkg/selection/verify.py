"""
Verification suites.

Each suite runs a family of exact checks and collects failures instead of
stopping at the first one, so the CLI can print a machine-readable list.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional

from selection import bounds, exact
from selection.gadgets import gen_gadget
from selection.graph import Graph, GraphClass, enumerate_graphs, gen_random, graph_id
from selection.mechanisms import MechanismSpec, candidate_scan, last_wins
from selection.rng import Prng, assign_blocks, derive_seed

logger = logging.getLogger(__name__)

SUITES = ('impartiality', 'formulas', 'lemmas', 'bounds')


def default_mechanisms() -> List[MechanismSpec]:
    return [
        MechanismSpec.two_partition(),
        MechanismSpec.k_partition(2),
        MechanismSpec.k_partition(3),
        MechanismSpec.permutation(),
    ]


@dataclass
class VerificationReport:
    suite: str
    checks: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, **details) -> None:
        self.checks += 1
        if not condition:
            details.setdefault('suite', self.suite)
            self.failures.append(details)
            logger.warning("check failed: %s", details)

    def merge(self, other: 'VerificationReport') -> None:
        self.checks += other.checks
        self.failures.extend(other.failures)

    def to_json(self) -> dict:
        return {'suite': self.suite, 'passed': self.passed, 'checks': self.checks, 'failures': self.failures}


def verify_impartiality(
    max_n: int = 3,
    random_graphs: int = 0,
    random_n: int = 4,
    seed: int = 0,
    guards: Optional[Mapping[str, int]] = None,
) -> VerificationReport:
    """Exhaustive impartiality of every mechanism on all graphs with 2..max_n vertices, plus seeded random graphs."""
    report = VerificationReport('impartiality')
    corpus = [g for n in range(2, max_n + 1) for g in enumerate_graphs(n)]
    corpus += [gen_random(random_n, 0.5, derive_seed(seed, t)) for t in range(random_graphs)]
    for g in corpus:
        for m in default_mechanisms():
            for i in g.vertices:
                result = exact.impartiality_check(m, g, i, guards=guards)
                report.expect(result.passed, graph=graph_id(g), mechanism=m.label, vertex=i,
                              violation=None if result.passed else result.to_json()['violation'])
    return report


def verify_formulas(guards: Optional[Mapping[str, int]] = None) -> VerificationReport:
    report = VerificationReport('formulas')
    for d in range(1, 21):
        report.expect(bounds.alpha2_sum(d) == bounds.alpha2_closed(d), check='alpha2 sum = closed', delta=d)
    for d in range(1, 13):
        report.expect(bounds.alpha_k(2, d, guards) == bounds.alpha2_sum(d), check='alpha_k collapse', delta=d)
    for k in range(2, 17):
        report.expect(bounds.alpha_k(k, 1, guards) == bounds.kpartition_guarantee(k), check='alpha_k(1)', k=k)
    for k in range(2, 11):
        report.expect(bounds.alpha_k(k, 2, guards) == bounds.alphak2_pairs(k), check='alpha_k(2) pairs', k=k)
    for k, value in bounds.iter_alphak2_pairs(30):
        report.expect(value == bounds.alphak2_pairs(k), check='incremental pairs', k=k)
    for name, k in (('alpha2', None), ('alpha_k', 3)):
        monotone = bounds.check_monotone(name, 10, k, guards)
        report.expect(monotone.passed, check='monotone', kind=monotone.kind, violations=monotone.violations)
    return report


def partition_corpus(seed: int = 0, max_n: int = 5, per_size: int = 4) -> List[Graph]:
    """Seeded graphs with ``per_size`` members for every n in ``2..max_n``."""
    return [
        gen_random(n, 0.5, derive_seed(seed, 1000 * n + t))
        for n in range(2, max_n + 1)
        for t in range(per_size)
    ]


def verify_lemmas(
    graphs: int = 100,
    assignments: int = 20,
    max_n: int = 5,
    seed: int = 0,
    guards: Optional[Mapping[str, int]] = None,
    per_size: int = 4,
) -> VerificationReport:
    """
    Candidate-scan score identity on a seeded random corpus, the fixed-partition
    bounds on seeded graphs of every size up to ``max_n``, singleton
    conditioning, and the k = 2 collapse of the k-partition mechanism onto the
    2-partition mechanism.
    """
    report = VerificationReport('lemmas')
    r = Prng(seed)
    corpus = []
    for t in range(graphs):
        n = r.uniform_below(max_n - 1) + 2
        corpus.append(gen_random(n, 0.4, derive_seed(seed, t)))
    for g in corpus:
        for _ in range(assignments):
            k = r.uniform_below(4) + 2
            blocks = assign_blocks(r, g.n, k).blocks()
            _, score = candidate_scan(g, blocks, last_wins)
            report.expect(score == exact.scan_score_identity(g, blocks), check='scan identity',
                          graph=graph_id(g), blocks=blocks)
    for g in partition_corpus(seed, max_n, per_size):
        for k in (2, 3):
            for check in (exact.fixed_partition_check(g, k, guards), exact.fixed_super_partition_check(g, k, guards)):
                report.expect(check.passed, check=check.name, graph=graph_id(g), k=k, failures=check.failures)
    for n in (2, 3):
        for g in enumerate_graphs(n):
            report.expect(exact.singleton_conditioning_check(g, n + 1, guards), check='singleton conditioning',
                          graph=graph_id(g))
            two = exact.exact_distribution(g, MechanismSpec.two_partition(), guards)
            k2 = exact.exact_distribution(g, MechanismSpec.k_partition(2), guards)
            report.expect(two == k2, check='k = 2 collapse', graph=graph_id(g))
    return report


def verify_bounds(guards: Optional[Mapping[str, int]] = None) -> VerificationReport:
    """Implemented mechanisms stay within the impartial upper bounds on the gadget graphs and at n = 3."""
    report = VerificationReport('bounds')
    for m in default_mechanisms():
        found, _ = exact.gadget_family_min_ratio('upper', m, guards=guards)
        report.expect(found <= Fraction(1, 2), check='upper gadgets', mechanism=m.label, ratio=str(found))
        for family, n in (('oneplus3', 3), ('oneplus5', 5)):
            found, name = exact.gadget_family_min_ratio(family, m, guards=guards)
            limit = bounds.upper_bound(n, GraphClass.NO_ABSTENTION)
            report.expect(found <= limit, check='gadget family', family=family, gadget=name,
                          mechanism=m.label, ratio=str(found), bound=str(limit))
        worst = exact.worst_case_search(3, m, GraphClass.NO_ABSTENTION, guards)
        limit = bounds.upper_bound(3, GraphClass.NO_ABSTENTION)
        report.expect(worst.ratio is not None and worst.ratio <= limit, check='worst case n=3',
                      mechanism=m.label, ratio=str(worst.ratio))
    hub = exact.ratio(gen_gadget('perm_up'), MechanismSpec.permutation(), guards)
    report.expect(hub.ratio == Fraction(2, 3), check='perm_up ratio', ratio=str(hub.ratio))
    return report


def run_suite(name: str, max_n: int = 3, seed: int = 0,
              guards: Optional[Mapping[str, int]] = None) -> VerificationReport:
    """Run one suite by name, or every suite for ``'all'``."""
    runners: Dict[str, Callable[[], VerificationReport]] = {
        'impartiality': lambda: verify_impartiality(max_n=max_n, seed=seed, guards=guards),
        'formulas': lambda: verify_formulas(guards),
        'lemmas': lambda: verify_lemmas(seed=seed, guards=guards),
        'bounds': lambda: verify_bounds(guards),
    }
    if name == 'all':
        combined = VerificationReport('all')
        for suite in SUITES:
            combined.merge(runners[suite]())
        return combined
    if name not in runners:
        raise ValueError(f"Unknown suite: {name}")
    return runners[name]()
