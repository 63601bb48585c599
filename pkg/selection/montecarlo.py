"""
Seeded Monte Carlo estimates of selection laws.

Trial ``t`` draws from its own stream ``stream(seed, t)``, so any split of the
trials across worker processes produces the same integer counts.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

from config.settings import HOEFFDING_DELTA
from selection.errors import DomainError
from selection.graph import Edge, Graph, indegree, max_indegree
from selection.mechanisms import MechanismSpec, run_mechanism
from selection.rng import stream

logger = logging.getLogger(__name__)


def hoeffding_eps(trials: int, delta: float = HOEFFDING_DELTA) -> float:
    """Half-width ``sqrt(ln(2/δ) / (2T))`` of a two-sided Hoeffding band for [0, 1] variables."""
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    if not 0 < delta < 1:
        raise DomainError(f"Confidence parameter must lie in (0, 1), got {delta}")
    return math.sqrt(math.log(2 / delta) / (2 * trials))


@dataclass(frozen=True)
class McEstimate:
    """Empirical selection counts of one seeded run."""
    graph_n: int
    mechanism: MechanismSpec
    trials: int
    seed: int
    counts: Tuple[int, ...]
    mean_degree: float
    delta: int

    @property
    def freq(self) -> List[float]:
        return [c / self.trials for c in self.counts]

    def hoeffding_eps(self, delta: float = HOEFFDING_DELTA) -> float:
        return hoeffding_eps(self.trials, delta)

    @property
    def ratio(self) -> Optional[float]:
        return self.mean_degree / self.delta if self.delta else None

    def to_json(self, confidence: float = HOEFFDING_DELTA) -> dict:
        return {
            'trials': self.trials,
            'seed': self.seed,
            'mechanism': self.mechanism.to_json(),
            'freq': self.freq,
            'mean_degree': self.mean_degree,
            'delta': self.delta,
            'ratio': self.ratio,
            'band': self.hoeffding_eps(confidence),
            'confidence_delta': confidence,
        }


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    band: float

    @property
    def low(self) -> float:
        return self.ratio - self.band

    @property
    def high(self) -> float:
        return self.ratio + self.band


def _count_range(args: Tuple[int, Tuple[Edge, ...], MechanismSpec, int, int, int]) -> List[int]:
    n, edges, m, seed, start, stop = args
    g = Graph(n, frozenset(edges))
    counts = [0] * n
    for t in range(start, stop):
        counts[run_mechanism(g, m, stream(seed, t)) - 1] += 1
    return counts


def estimate(g: Graph, m: MechanismSpec, trials: int, seed: int, workers: int = 1) -> McEstimate:
    """
    Run ``m`` on ``g`` for ``trials`` independent seeded trials.

    Args:
        g: The nomination graph
        m: Mechanism to run
        trials: Number of trials, at least 1
        seed: Master seed; trial ``t`` uses ``stream(seed, t)``
        workers: Worker processes; results do not depend on this
    """
    if not isinstance(trials, int) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    edges = tuple(g.sorted_edges())
    if workers > 1 and trials > workers:
        step = math.ceil(trials / workers)
        jobs = [(g.n, edges, m, seed, s, min(s + step, trials)) for s in range(0, trials, step)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(_count_range, jobs))
        counts = [sum(column) for column in zip(*parts)]
    else:
        counts = _count_range((g.n, edges, m, seed, 0, trials))
    mean = sum(c * indegree(g, v) for v, c in zip(g.vertices, counts)) / trials
    logger.info("%s on n=%d: %d trials, seed %d, mean degree %.4f", m.label, g.n, trials, seed, mean)
    return McEstimate(g.n, m, trials, seed, tuple(counts), mean, max_indegree(g))


def estimate_ratio(
    g: Graph,
    m: MechanismSpec,
    trials: int,
    seed: int,
    confidence: float = HOEFFDING_DELTA,
    workers: int = 1,
) -> RatioEstimate:
    """
    Mean selected degree over Δ with its Hoeffding band.

    Selected degrees lie in [0, Δ], so the band on the ratio is the plain
    [0, 1] half-width.

    Raises:
        DomainError: If the graph has no edges
    """
    delta = max_indegree(g)
    if delta == 0:
        raise DomainError("The ratio is undefined on a graph without edges")
    result = estimate(g, m, trials, seed, workers)
    return RatioEstimate(result.mean_degree / delta, hoeffding_eps(trials, confidence))
