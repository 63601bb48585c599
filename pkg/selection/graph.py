"""
Nomination graph data model.

A nomination graph is a loop-free directed graph on the vertices ``1..n``; an
edge ``(u, v)`` means agent ``u`` nominates agent ``v``. This module provides
the immutable ``Graph`` value, degree queries, graph classes, the edge-list and
JSON text formats, seeded random corpora and exhaustive enumeration.
"""
import itertools
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    AbstractSet,
    Collection,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
)

from config.settings import DEFAULT_GUARDS
from selection.errors import (
    DomainError,
    DuplicateEdgeError,
    MalformedLineError,
    SelfLoopError,
    SizeGuardError,
    VertexRangeError,
)
from selection.rng import Prng

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class GraphClass(Enum):
    """Graph families the bounds are stated for."""
    ALL = 'All'
    NO_ABSTENTION = 'NoAbstention'
    OUTDEGREE_EXACTLY_ONE = 'OutdegreeExactlyOne'

    @classmethod
    def from_name(cls, name: str) -> 'GraphClass':
        """Look up a class by value (``NoAbstention``) or CLI spelling (``no-abstention``)."""
        key = name.strip().lower().replace('_', '-')
        aliases = {
            'all': cls.ALL,
            'noabstention': cls.NO_ABSTENTION,
            'no-abstention': cls.NO_ABSTENTION,
            'outdegreeexactlyone': cls.OUTDEGREE_EXACTLY_ONE,
            'outdegree-exactly-one': cls.OUTDEGREE_EXACTLY_ONE,
            'outdegree-one': cls.OUTDEGREE_EXACTLY_ONE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"Unknown graph class: {name}") from None


@dataclass(frozen=True)
class Graph:
    """
    An immutable loop-free directed graph on vertices ``1..n``.

    Both adjacency directions are indexed at construction so subset indegree
    queries cost O(indegree).
    """
    n: int
    edges: FrozenSet[Edge]
    _in: Tuple[FrozenSet[int], ...] = field(init=False, repr=False, compare=False)
    _out: Tuple[FrozenSet[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"Vertex count must be a positive integer, got {self.n!r}")
        edges = frozenset(self.edges)
        incoming: List[set] = [set() for _ in range(self.n + 1)]
        outgoing: List[set] = [set() for _ in range(self.n + 1)]
        for u, v in edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DomainError(f"Edge ({u}, {v}) has an endpoint outside 1..{self.n}")
            if u == v:
                raise DomainError(f"Self-loop on vertex {u} is not allowed")
            incoming[v].add(u)
            outgoing[u].add(v)
        object.__setattr__(self, 'edges', edges)
        object.__setattr__(self, '_in', tuple(frozenset(s) for s in incoming))
        object.__setattr__(self, '_out', tuple(frozenset(s) for s in outgoing))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> 'Graph':
        """Build a graph from an edge iterable, rejecting repeated edges."""
        seen = set()
        for edge in edges:
            edge = (int(edge[0]), int(edge[1]))
            if edge in seen:
                raise DomainError(f"Duplicate edge {edge}")
            seen.add(edge)
        return cls(n, frozenset(seen))

    @classmethod
    def edgeless(cls, n: int) -> 'Graph':
        return cls(n, frozenset())

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def in_neighbors(self, i: int) -> FrozenSet[int]:
        _check_vertex(self, i)
        return self._in[i]

    def out_neighbors(self, i: int) -> FrozenSet[int]:
        _check_vertex(self, i)
        return self._out[i]


@dataclass(frozen=True)
class VertexSubset:
    """A set of vertices of a graph with ``n`` vertices."""
    n: int
    members: FrozenSet[int]

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        bad = [v for v in members if not 1 <= v <= self.n]
        if bad:
            raise DomainError(f"Subset members {sorted(bad)} outside 1..{self.n}")
        object.__setattr__(self, 'members', members)

    def __contains__(self, item: object) -> bool:
        return item in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


def _check_vertex(g: Graph, i: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= g.n:
        raise DomainError(f"Vertex {i!r} outside 1..{g.n}")


def indegree_from(g: Graph, s: Collection[int], i: int) -> int:
    """Number of edges ``(j, i)`` with ``j`` in ``s``."""
    _check_vertex(g, i)
    incoming = g._in[i]
    if isinstance(s, VertexSubset):
        s = s.members
    if isinstance(s, AbstractSet) and len(s) < len(incoming):
        return sum(1 for j in s if j in incoming)
    return sum(1 for j in incoming if j in s)


def indegree(g: Graph, i: int) -> int:
    """Total indegree of ``i``."""
    _check_vertex(g, i)
    return len(g._in[i])


def max_indegree(g: Graph) -> int:
    """Maximum indegree over all vertices; 0 for edgeless graphs."""
    return max(len(g._in[i]) for i in g.vertices)


def outdegree(g: Graph, i: int) -> int:
    """Number of edges leaving ``i``."""
    _check_vertex(g, i)
    return len(g._out[i])


def in_class(g: Graph, c: GraphClass) -> bool:
    """Whether ``g`` belongs to graph class ``c``."""
    if c is GraphClass.ALL:
        return True
    if c is GraphClass.NO_ABSTENTION:
        return all(g._out[i] for i in g.vertices)
    if c is GraphClass.OUTDEGREE_EXACTLY_ONE:
        return all(len(g._out[i]) == 1 for i in g.vertices)
    raise DomainError(f"Unknown graph class: {c!r}")


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """
    Apply a vertex permutation.

    Args:
        g: The graph
        perm: ``perm[i - 1]`` is the new label of vertex ``i``

    Returns:
        The graph with edges ``(perm(u), perm(v))``
    """
    if sorted(perm) != list(g.vertices):
        raise DomainError(f"{list(perm)} is not a permutation of 1..{g.n}")
    return Graph(g.n, frozenset((perm[u - 1], perm[v - 1]) for u, v in g.edges))


def replace_out_edges(g: Graph, i: int, targets: Iterable[int]) -> Graph:
    """Return ``g`` with the outgoing edges of ``i`` replaced by edges to ``targets``."""
    _check_vertex(g, i)
    kept = {(u, v) for u, v in g.edges if u != i}
    kept.update((i, t) for t in targets)
    return Graph(g.n, frozenset(kept))


def graph_index(g: Graph) -> int:
    """
    Canonical index of ``g`` among all graphs on ``g.n`` vertices.

    Bit ``b`` is set iff the ``b``-th ordered pair in lexicographic order is an
    edge; this is the order ``enumerate_graphs`` uses for class ``All``.
    """
    position = {pair: bit for bit, pair in enumerate(_ordered_pairs(g.n))}
    return sum(1 << position[e] for e in g.edges)


def graph_id(g: Graph) -> str:
    """Short stable identifier used in reports."""
    return f"n{g.n}:{graph_index(g):#x}"


# ---------------------------------------------------------------------------
# Text formats


def _is_number(field: str) -> bool:
    # ASCII only: str.isdigit also accepts superscripts and other scripts' digits
    return field.isascii() and field.isdigit()


def parse_graph(text: str) -> Graph:
    """
    Parse the edge-list format.

    The first non-comment line is the vertex count; each following non-comment
    line ``u v`` is an edge ``u -> v``. Lines starting with ``#`` and blank
    lines are ignored.

    Raises:
        MalformedLineError: Unparseable count or edge line, or no count at all
        SelfLoopError: An edge ``u u``
        DuplicateEdgeError: An edge given twice
        VertexRangeError: An endpoint outside ``1..n``
    """
    n: Optional[int] = None
    edges = set()
    for line_number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1 or not _is_number(fields[0]) or int(fields[0]) < 1:
                raise MalformedLineError(f"expected a positive vertex count, got {line!r}", line_number)
            n = int(fields[0])
            continue
        if len(fields) != 2 or not all(_is_number(f) for f in fields):
            raise MalformedLineError(f"expected 'u v', got {line!r}", line_number)
        u, v = int(fields[0]), int(fields[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexRangeError(f"edge {u} {v} with n = {n}", line_number)
        if u == v:
            raise SelfLoopError(f"{u} {v}", line_number)
        if (u, v) in edges:
            raise DuplicateEdgeError(f"{u} {v}", line_number)
        edges.add((u, v))
    if n is None:
        raise MalformedLineError("missing vertex count")
    return Graph(n, frozenset(edges))


def serialize_graph(g: Graph, comment: Optional[str] = None) -> str:
    """Render ``g`` in the edge-list format with edges in sorted order."""
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(str(g.n))
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> Dict[str, object]:
    return {'n': g.n, 'edges': [list(e) for e in g.sorted_edges()]}


def graph_from_json(data: object) -> Graph:
    """Build a graph from ``{"n": int, "edges": [[u, v], ...]}``."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise MalformedLineError(f"invalid JSON: {e}") from e
    if not isinstance(data, dict) or 'n' not in data or 'edges' not in data:
        raise MalformedLineError("JSON graph needs 'n' and 'edges'")
    n = data['n']
    if not isinstance(n, int) or n < 1:
        raise MalformedLineError(f"vertex count must be a positive integer, got {n!r}")
    edges = set()
    for index, pair in enumerate(data['edges'], 1):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
            raise MalformedLineError(f"edge {index} is not a pair of integers: {pair!r}")
        u, v = pair
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexRangeError(f"edge {u} {v} with n = {n}")
        if u == v:
            raise SelfLoopError(f"{u} {v}")
        if (u, v) in edges:
            raise DuplicateEdgeError(f"{u} {v}")
        edges.add((u, v))
    return Graph(n, frozenset(edges))


# ---------------------------------------------------------------------------
# Random corpora


def gen_random(n: int, edge_prob: float, seed: int) -> Graph:
    """
    Random graph where each ordered pair is an edge independently.

    Pairs are visited in lexicographic order and each consumes one draw.
    """
    if not 0.0 <= edge_prob <= 1.0:
        raise DomainError(f"Edge probability must lie in [0, 1], got {edge_prob}")
    if n < 1:
        raise DomainError(f"Vertex count must be positive, got {n}")
    r = Prng(seed)
    edges = frozenset(pair for pair in _ordered_pairs(n) if r.next_float() < edge_prob)
    return Graph(n, edges)


def gen_random_functional(n: int, seed: int) -> Graph:
    """Random graph in which every vertex nominates exactly one other vertex."""
    if n < 2:
        raise DomainError(f"A functional graph needs n >= 2, got {n}")
    r = Prng(seed)
    edges = set()
    for i in range(1, n + 1):
        target = r.uniform_below(n - 1) + 1
        if target >= i:
            target += 1
        edges.add((i, target))
    return Graph(n, frozenset(edges))


# ---------------------------------------------------------------------------
# Enumeration


def _ordered_pairs(n: int) -> List[Edge]:
    return [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]


def count_graphs(n: int, c: GraphClass) -> int:
    """Number of labeled graphs on ``n`` vertices in class ``c``."""
    if c is GraphClass.ALL:
        return 2 ** (n * (n - 1))
    if c is GraphClass.NO_ABSTENTION:
        return (2 ** (n - 1) - 1) ** n
    return (n - 1) ** n


_ENUMERATION_GUARDS = {
    GraphClass.ALL: 'enumerate_all_n',
    GraphClass.NO_ABSTENTION: 'enumerate_no_abstention_n',
    GraphClass.OUTDEGREE_EXACTLY_ONE: 'enumerate_functional_n',
}


def enumerate_graphs(n: int, c: GraphClass = GraphClass.ALL, limit: Optional[int] = None) -> Iterator[Graph]:
    """
    Yield every labeled graph on ``n`` vertices in class ``c`` exactly once.

    Order: for ``All``, edge bitmasks ascending (see ``graph_index``); for the
    other classes, the product of per-vertex out-neighbourhoods with vertex 1
    varying slowest, each vertex's choices ordered by their own bitmask.

    Raises:
        SizeGuardError: If ``n`` exceeds the class limit
    """
    guard = _ENUMERATION_GUARDS[c]
    limit = DEFAULT_GUARDS[guard] if limit is None else limit
    if n < 1:
        raise DomainError(f"Vertex count must be positive, got {n}")
    if n > limit:
        raise SizeGuardError(guard, limit, count_graphs(n, c), f"enumerating {c.value} graphs with n = {n}")
    logger.debug("enumerating %d %s graphs on %d vertices", count_graphs(n, c), c.value, n)

    if c is GraphClass.ALL:
        pairs = _ordered_pairs(n)
        for mask in range(2 ** len(pairs)):
            yield Graph(n, frozenset(p for bit, p in enumerate(pairs) if mask >> bit & 1))
        return

    choices = []
    for i in range(1, n + 1):
        others = [v for v in range(1, n + 1) if v != i]
        if c is GraphClass.OUTDEGREE_EXACTLY_ONE:
            choices.append([((i, v),) for v in others])
        else:
            options = []
            for mask in range(1, 2 ** len(others)):
                options.append(tuple((i, v) for bit, v in enumerate(others) if mask >> bit & 1))
            choices.append(options)
    for combo in itertools.product(*choices):
        yield Graph(n, frozenset(e for part in combo for e in part))
