"""
Gadget graphs.

Small fixed graphs that certify upper bounds on what impartial mechanisms can
achieve, and the parameterized families used for tightness checks. Vertex
numbers of the fixed gadgets follow the drawing order of the figures they come
from:

* ``upper_left`` / ``upper_right`` - the 2-cycle, and the 2-cycle without
  vertex 1's nomination (edge 2 -> 1 only). Vertex 1 is the vertex whose
  probability impartiality forces to agree between the two.
* ``perm_up`` - 2-cycles 1 <-> 2 and 3 <-> 4 plus 3 -> 2 and 4 -> 2; vertex 2
  is the hub with indegree 3.
* ``oneplus3_*``, ``oneplus4_*``, ``oneplus5_*``, ``oneplus7_*`` - the graphs
  without abstentions behind the upper bounds for n = 3, even n >= 4, n = 5
  and odd n >= 7. The even and odd families pad vertices beyond 4 (resp. 7)
  with mutually nominating pairs ``(5, 6), (7, 8), ...`` (resp. ``(8, 9), ...``).
* ``single_edge(n)`` - edge 1 -> 2 plus isolated vertices 3..n.
* ``cycle_plus(n)`` - edges i -> i+1 for i < n-1, then n-1 -> 1 and n -> 1.
* ``pair_matching(n)`` - mutually nominating pairs (1, 2), (3, 4), ...
"""
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from selection.errors import DomainError
from selection.graph import Edge, Graph

_FIXED: Dict[str, Tuple[int, Tuple[Edge, ...]]] = {
    'upper_left': (2, ((1, 2), (2, 1))),
    'upper_right': (2, ((2, 1),)),
    'perm_up': (4, ((1, 2), (2, 1), (3, 4), (4, 3), (3, 2), (4, 2))),
    'oneplus3_a': (3, ((3, 1), (3, 2), (1, 2), (2, 1))),
    'oneplus3_b': (3, ((2, 1), (3, 2), (1, 3), (3, 1))),
    'oneplus5_a': (5, ((1, 2), (2, 3), (3, 4), (4, 5), (5, 1))),
    'oneplus5_b': (5, ((4, 5), (5, 1), (1, 2), (2, 3), (3, 2))),
    'oneplus5_c': (5, ((5, 1), (1, 2), (4, 3), (2, 3), (3, 2))),
    'oneplus5_d': (5, ((4, 5), (5, 1), (1, 2), (1, 3), (3, 2), (2, 3))),
    'oneplus5_e': (5, ((5, 1), (1, 2), (2, 4), (4, 3), (3, 2))),
    'oneplus5_f': (5, ((1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 1))),
}

_EVEN_CORE: Dict[str, Tuple[Edge, ...]] = {
    'oneplus4_a': ((1, 2), (2, 1), (3, 4), (4, 3)),
    'oneplus4_b': ((3, 4), (4, 1), (4, 2), (1, 2), (2, 1)),
    'oneplus4_c': ((1, 2), (2, 3), (3, 4), (4, 1), (4, 2)),
}

_ODD_CORE: Dict[str, Tuple[Edge, ...]] = {
    'oneplus7_a': ((5, 7), (7, 6), (6, 5), (1, 2), (2, 1), (3, 4), (4, 3)),
    'oneplus7_b': ((3, 1), (3, 2), (4, 3), (5, 7), (7, 6), (6, 5), (1, 2), (2, 1)),
    'oneplus7_c': ((5, 3), (5, 4), (7, 6), (6, 5), (1, 2), (2, 1), (3, 4), (4, 3)),
    'oneplus7_d': ((1, 2), (2, 4), (4, 3), (3, 1), (3, 2), (5, 7), (7, 6), (6, 5)),
    'oneplus7_e': ((3, 4), (4, 7), (5, 3), (5, 4), (6, 5), (7, 6), (1, 2), (2, 1)),
}

FAMILIES: Dict[str, Sequence[str]] = {
    'upper': ('upper_left', 'upper_right'),
    'oneplus3': ('oneplus3_a', 'oneplus3_b'),
    'oneplus4': tuple(sorted(_EVEN_CORE)),
    'oneplus5': tuple(name for name in sorted(_FIXED) if name.startswith('oneplus5')),
    'oneplus7': tuple(sorted(_ODD_CORE)),
}


def _paired(first: int, n: int) -> List[Edge]:
    edges: List[Edge] = []
    for u in range(first, n, 2):
        edges.extend([(u, u + 1), (u + 1, u)])
    return edges


def single_edge(n: int) -> Graph:
    if n < 2:
        raise DomainError(f"single_edge needs n >= 2, got {n}")
    return Graph(n, frozenset({(1, 2)}))


def cycle_plus(n: int) -> Graph:
    if n < 3:
        raise DomainError(f"cycle_plus needs n >= 3, got {n}")
    edges = {(i, i + 1) for i in range(1, n - 1)}
    edges.update({(n - 1, 1), (n, 1)})
    return Graph(n, frozenset(edges))


def pair_matching(n: int) -> Graph:
    if n < 2 or n % 2:
        raise DomainError(f"pair_matching needs an even n >= 2, got {n}")
    return Graph(n, frozenset(_paired(1, n)))


_PARAMETERIZED: Dict[str, Callable[[int], Graph]] = {
    'single_edge': single_edge,
    'cycle_plus': cycle_plus,
    'pair_matching': pair_matching,
}


def gadget_names() -> List[str]:
    return sorted([*_FIXED, *_EVEN_CORE, *_ODD_CORE, *_PARAMETERIZED])


def needs_size(name: str) -> bool:
    """Whether ``gen_gadget`` requires ``n`` for this name."""
    return name in _PARAMETERIZED


def gen_gadget(name: str, n: Optional[int] = None) -> Graph:
    """
    Build a named gadget.

    Args:
        name: One of ``gadget_names()``
        n: Size for parameterized families; optional for the padded
            ``oneplus4_*`` (even, default 4) and ``oneplus7_*`` (odd, default 7)
            families; must be omitted or equal to the drawn size otherwise

    Raises:
        DomainError: Unknown name, missing size, or invalid size for the family
    """
    if name in _PARAMETERIZED:
        if n is None:
            raise DomainError(f"Gadget {name} needs a size n")
        return _PARAMETERIZED[name](n)
    if name in _FIXED:
        size, edges = _FIXED[name]
        if n is not None and n != size:
            raise DomainError(f"Gadget {name} has exactly {size} vertices, got n = {n}")
        return Graph(size, frozenset(edges))
    if name in _EVEN_CORE:
        n = 4 if n is None else n
        if n < 4 or n % 2:
            raise DomainError(f"Gadget {name} needs an even n >= 4, got {n}")
        return Graph(n, frozenset([*_EVEN_CORE[name], *_paired(5, n)]))
    if name in _ODD_CORE:
        n = 7 if n is None else n
        if n < 7 or n % 2 == 0:
            raise DomainError(f"Gadget {name} needs an odd n >= 7, got {n}")
        return Graph(n, frozenset([*_ODD_CORE[name], *_paired(8, n)]))
    raise DomainError(f"Unknown gadget: {name}")


def gadget_family(family: str, n: Optional[int] = None) -> List[Tuple[str, Graph]]:
    """All gadgets of a figure family, as ``(name, graph)`` pairs."""
    try:
        names = FAMILIES[family]
    except KeyError:
        raise DomainError(f"Unknown gadget family: {family}") from None
    return [(name, gen_gadget(name, n)) for name in names]
