"""
Performance guarantees and upper bounds, evaluated exactly.

Lower bounds: ``alpha2_sum``/``alpha2_closed`` for the 2-partition mechanism,
``alpha_k`` for the k-partition mechanism (a multinomial average over
compositions of Δ), ``alphak2_pairs`` for the Δ = 2 case without abstentions.
Upper bounds: ``upper_bound`` for impartial mechanisms on each graph class.
All values are ``Fraction``; tables export as CSV.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from config.settings import DEFAULT_GUARDS
from selection.errors import DomainError, SizeGuardError, UnsupportedBoundError
from selection.graph import GraphClass
from selection.mechanisms import MechanismKind

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ('bound_id', 'k', 'delta_or_n', 'class', 'value_num', 'value_den', 'value_float')


@dataclass(frozen=True)
class Composition:
    """Ordered split of Δ into ``k`` nonnegative parts."""
    parts: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts or any(p < 0 for p in self.parts):
            raise DomainError(f"Invalid composition {self.parts!r}")

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    def prefix_sums(self) -> List[int]:
        """``z_j = v_1 + ... + v_{j-1}`` for j = 1..k."""
        out, running = [], 0
        for part in self.parts:
            out.append(running)
            running += part
        return out

    def multinomial(self) -> int:
        result, remaining = 1, self.total
        for part in self.parts:
            result *= math.comb(remaining, part)
            remaining -= part
        return result


@dataclass(frozen=True)
class BoundRow:
    bound_id: str
    k: Optional[int]
    param: int
    graph_class: str
    value: Fraction

    def as_csv(self) -> List[str]:
        return [
            self.bound_id,
            '' if self.k is None else str(self.k),
            str(self.param),
            self.graph_class,
            str(self.value.numerator),
            str(self.value.denominator),
            repr(float(self.value)),
        ]


@dataclass
class BoundTable:
    """Rows of one bound evaluated over a parameter range."""
    bound_id: str
    rows: List[BoundRow] = field(default_factory=list)

    def values(self) -> List[Fraction]:
        return [row.value for row in self.rows]

    def to_csv(self) -> str:
        return export_table(self.rows)


@dataclass
class MonotoneReport:
    kind: str
    checked: int = 0
    violations: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _require_delta(delta: int) -> None:
    if not isinstance(delta, int) or delta < 1:
        raise DomainError(f"Δ must be a positive integer, got {delta!r}")


def _require_k(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")


def alpha2_sum(delta: int) -> Fraction:
    """``1/(Δ 2^Δ) * sum_j C(Δ, j) * min(Δ/2, j)``."""
    _require_delta(delta)
    total = sum(math.comb(delta, j) * min(Fraction(delta, 2), Fraction(j)) for j in range(delta + 1))
    return Fraction(total) / (delta * 2 ** delta)


def alpha2_closed(delta: int) -> Fraction:
    """Closed form of ``alpha2_sum``: 1/4 at Δ = 1, even Δ by the central binomial, odd Δ ≥ 3 defers to Δ - 1."""
    _require_delta(delta)
    if delta == 1:
        return Fraction(1, 4)
    if delta % 2:
        return alpha2_closed(delta - 1)
    return Fraction(1, 2) - Fraction(math.comb(delta, delta // 2), 2 ** (delta + 2))


def composition_count(k: int, delta: int) -> int:
    return math.comb(delta + k - 1, k - 1)


def compositions(k: int, delta: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """
    All compositions of ``delta`` into ``k`` parts in colex order, each with
    its multinomial coefficient.

    The last part is fixed first, so the coefficient is built up one binomial
    per fixed part instead of from factorials.
    """
    def fill(slots: int, remaining: int, suffix: Tuple[int, ...], coefficient: int):
        if slots == 1:
            yield (remaining,) + suffix, coefficient
            return
        for last in range(remaining + 1):
            yield from fill(slots - 1, remaining - last, (last,) + suffix,
                            coefficient * math.comb(remaining, last))

    yield from fill(k, delta, (), 1)


def super_partition_bound(z: Sequence[int], delta: int) -> Fraction:
    """``min_j z_j + (k - j)/k * (Δ - z_j)`` over j = 1..k for prefix indegrees ``z``."""
    k = len(z)
    if k < 1:
        raise DomainError("Need at least one prefix indegree")
    return min(Fraction(z_j) + Fraction(k - j, k) * (delta - z_j) for j, z_j in enumerate(z, 1))


def alpha_k(k: int, delta: int, guards: Optional[Mapping[str, int]] = None) -> Fraction:
    """
    Guarantee of the k-partition mechanism on graphs with maximum degree Δ.

    Raises:
        DomainError: k < 2 or Δ < 1
        SizeGuardError: More compositions than the ``compositions`` guard
    """
    _require_k(k)
    _require_delta(delta)
    limit = (DEFAULT_GUARDS if guards is None else guards)['compositions']
    count = composition_count(k, delta)
    if count > limit:
        raise SizeGuardError('compositions', limit, count, f"alpha_k(k={k}, Δ={delta})")
    total = Fraction(0)
    for parts, coefficient in compositions(k, delta):
        z = Composition(parts).prefix_sums()
        total += coefficient * super_partition_bound(z, delta)
    return total / (delta * k ** delta)


def _pair_term_sum(k: int) -> int:
    """``sum over x1, x2 in 1..k of max(max(x1, x2), 2 min(x1, x2))`` (twice the pair sum)."""
    return sum(max(max(a, b), 2 * min(a, b)) for a in range(1, k + 1) for b in range(1, k + 1))


def alphak2_pairs(k: int) -> Fraction:
    """Δ = 2 guarantee of the k-partition mechanism: ``1 - (1/k^3) sum max(max/2, min)``."""
    _require_k(k)
    return 1 - Fraction(_pair_term_sum(k), 2 * k ** 3)


def iter_alphak2_pairs(k_max: int) -> Iterator[Tuple[int, Fraction]]:
    """``(k, alphak2_pairs(k))`` for k = 2..k_max, adding one row and column of pairs per step."""
    _require_k(k_max)
    doubled = _pair_term_sum(1)
    for k in range(2, k_max + 1):
        doubled += 2 * k + 2 * sum(max(k, 2 * x) for x in range(1, k))
        yield k, 1 - Fraction(doubled, 2 * k ** 3)


def kpartition_guarantee(k: int) -> Fraction:
    _require_k(k)
    return Fraction(k - 1, 2 * k)


def singleton_partition_probability(k: int, n: int) -> Fraction:
    """Probability that a uniform assignment of ``n`` vertices to ``k`` blocks leaves every block with at most one vertex."""
    _require_k(k)
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if k < n:
        return Fraction(0)
    return Fraction(math.perm(k, n), k ** n)


def permutation_limit_bound(k: int, n: int) -> Fraction:
    """
    Lower bound on the permutation mechanism obtained from the k-partition
    guarantee conditioned on singleton blocks: ``((k - n)/k)^n (k - 1)/(2k)``.
    """
    _require_k(k)
    if k < n:
        return Fraction(0)
    return Fraction(k - n, k) ** n * kpartition_guarantee(k)


def no_abstention_lower_bound(kind: MechanismKind, k: Optional[int] = None) -> Fraction:
    """Guarantee on graphs without abstentions (the Δ = 2 evaluation, or 7/12 for permutations)."""
    if kind is MechanismKind.TWO_PARTITION:
        return alpha2_sum(2)
    if kind is MechanismKind.K_PARTITION:
        if k is None:
            raise DomainError("The k-partition bound needs k")
        return alphak2_pairs(k)
    return Fraction(7, 12)


def upper_bound(n: int, c: GraphClass) -> Fraction:
    """
    Best ratio any impartial mechanism can guarantee on class ``c`` at size ``n``.

    Raises:
        DomainError: n < 2
        UnsupportedBoundError: n = 2 for the classes without abstentions
    """
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    if c is GraphClass.ALL:
        return Fraction(1, 2)
    if n == 2:
        raise UnsupportedBoundError(f"No upper bound is stated for class {c.value} at n = 2")
    if c is GraphClass.NO_ABSTENTION:
        return Fraction(3, 4) if n == 3 else Fraction(3 * n - 1, 4 * n)
    if n == 3:
        return Fraction(5, 6)
    if n >= 6 and n % 2 == 0:
        return Fraction(6 * n - 1, 8 * n)
    return Fraction(3, 4)


def check_monotone(kind: str, delta_max: int, k: Optional[int] = None,
                   guards: Optional[Mapping[str, int]] = None) -> MonotoneReport:
    """
    Check monotonicity in Δ over 1..delta_max.

    ``kind='alpha2'`` checks ``α₂(Δ+1) >= α₂(Δ)`` and ``α₂(Δ+2) > α₂(Δ)``;
    ``kind='alpha_k'`` checks ``α_k(Δ+1) >= α_k(Δ)`` for the given ``k``.
    """
    _require_delta(delta_max)
    if kind == 'alpha2':
        values = [alpha2_closed(d) for d in range(1, delta_max + 1)]
    elif kind == 'alpha_k':
        if k is None:
            raise DomainError("alpha_k monotonicity needs k")
        values = [alpha_k(k, d, guards) for d in range(1, delta_max + 1)]
    else:
        raise DomainError(f"Unknown monotonicity kind: {kind}")
    report = MonotoneReport(kind if k is None else f"{kind}@{k}")
    for i in range(len(values) - 1):
        report.checked += 1
        if values[i + 1] < values[i]:
            report.violations.append({'delta': i + 1, 'step': 1,
                                      'lower': str(values[i]), 'upper': str(values[i + 1])})
        if kind == 'alpha2' and i + 2 < len(values):
            report.checked += 1
            if not values[i + 2] > values[i]:
                report.violations.append({'delta': i + 1, 'step': 2,
                                          'lower': str(values[i]), 'upper': str(values[i + 2])})
    if report.violations:
        logger.warning("monotonicity of %s fails at %s", report.kind, report.violations[0])
    return report


# ---------------------------------------------------------------------------
# Tables


def alpha2_table(deltas: Iterable[int]) -> BoundTable:
    table = BoundTable('alpha2')
    for d in deltas:
        table.rows.append(BoundRow('alpha2', 2, d, GraphClass.ALL.value, alpha2_closed(d)))
    return table


def alpha_k_table(k: int, deltas: Iterable[int], guards: Optional[Mapping[str, int]] = None) -> BoundTable:
    table = BoundTable('alpha_k')
    for d in deltas:
        table.rows.append(BoundRow('alpha_k', k, d, GraphClass.ALL.value, alpha_k(k, d, guards)))
    return table


def upper_table(c: GraphClass, ns: Iterable[int]) -> BoundTable:
    table = BoundTable('upper')
    for n in ns:
        table.rows.append(BoundRow('upper', None, n, c.value, upper_bound(n, c)))
    return table


def export_table(rows: Iterable[BoundRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())
    return buffer.getvalue()
