"""Homomorphism and independent set counts with their entropy upper bounds.

Source graphs G are simple networkx graphs on vertices 1..n. Target graphs F
may carry self-loops, which networkx stores as v in F.adj[v].
"""

import functools
import itertools
import math
import random
from collections.abc import Iterable, Mapping
from logging import getLogger
from typing import Any, NamedTuple

import networkx as nx

from .const import DEFAULT_HOM_GUARD, DEFAULT_INDEPENDENT_SET_LIMIT
from .exceptions import InputParseError, PreconditionError, ResourceGuardError
from .schemas import GRAPH_SCHEMA, validate

logger = getLogger(__name__)


def make_graph(n: int, edges: Iterable[Iterable[int]], loops: Iterable[int] = ()) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(1, n + 1))
    for u, v in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise PreconditionError(f"edge {u}-{v} leaves the vertex set [1..{n}]")
        if u == v:
            raise PreconditionError(f"self-loop at {u} must be listed under loops")
        if graph.has_edge(u, v):
            raise PreconditionError(f"edge {u}-{v} listed twice")
        graph.add_edge(u, v)
    for v in loops:
        if not 1 <= v <= n:
            raise PreconditionError(f"loop at {v} leaves the vertex set [1..{n}]")
        graph.add_edge(v, v)
    return graph


def _relabelled(graph: nx.Graph) -> nx.Graph:
    return nx.convert_node_labels_to_integers(graph, first_label=1, ordering="sorted")


def independent_set_gadget() -> nx.Graph:
    """Looped vertex 1 joined to vertex 2; Hom(G, gadget) is in bijection with I(G)."""
    return make_graph(2, [(1, 2)], loops=[1])


def complete_graph(r: int) -> nx.Graph:
    return _relabelled(nx.complete_graph(r))


def cycle_graph(n: int) -> nx.Graph:
    return _relabelled(nx.cycle_graph(n))


def complete_bipartite_graph(a: int, b: int) -> nx.Graph:
    return _relabelled(nx.complete_bipartite_graph(a, b))


def random_graph(n: int, p: float, rng: random.Random) -> nx.Graph:
    return _relabelled(nx.gnp_random_graph(n, p, seed=rng.randrange(2**32)))


def require_simple(graph: nx.Graph) -> None:
    if nx.number_of_selfloops(graph):
        raise PreconditionError("source graph must not have self-loops")


def closed_adjacency(target: nx.Graph) -> dict[Any, frozenset]:
    """Neighbourhood of every target vertex, including itself when looped."""
    return {v: frozenset(target.adj[v]) for v in target.nodes}


class DegreeOrdering(NamedTuple):
    order: tuple[int, ...]
    p_values: Mapping[int, int]
    degrees: Mapping[int, int]


def degree_ordering(graph: nx.Graph) -> DegreeOrdering:
    """Vertices by nonincreasing degree, ties by label, with p(v) preceding neighbours."""
    require_simple(graph)
    degrees = dict(graph.degree)
    order = tuple(sorted(graph.nodes, key=lambda v: (-degrees[v], v)))
    position = {v: index for index, v in enumerate(order)}
    p_values = {v: sum(position[u] < position[v] for u in graph.adj[v]) for v in order}
    assert sum(p_values.values()) == graph.number_of_edges(), "p-values must count every edge once"
    return DegreeOrdering(order, p_values, degrees)


def _check_guard(base: int, exponent: int, guard: int, allow_large: bool, what: str) -> None:
    if not allow_large and base**exponent > guard:
        raise ResourceGuardError(
            f"{what}: {base}^{exponent} candidate maps exceed the guard {guard}"
        )


def _component_homs(graph: nx.Graph, component: set, adjacency: dict[Any, frozenset]) -> int:
    root = min(component)
    traversal = [root] + [v for _, v in nx.bfs_edges(graph, root, sort_neighbors=sorted)]
    earlier = [
        [traversal.index(u) for u in graph.adj[v] if traversal.index(u) < index]
        for index, v in enumerate(traversal)
    ]
    targets = list(adjacency)
    image: list[Any] = [None] * len(traversal)

    def extend(index: int) -> int:
        if index == len(traversal):
            return 1
        if earlier[index]:
            choices = functools.reduce(
                frozenset.intersection, (adjacency[image[j]] for j in earlier[index])
            )
        else:
            choices = frozenset(targets)
        total = 0
        for choice in choices:
            image[index] = choice
            total += extend(index + 1)
        return total

    return extend(0)


def hom_count_exact(
    graph: nx.Graph,
    target: nx.Graph,
    guard: int = DEFAULT_HOM_GUARD,
    allow_large: bool = False,
) -> int:
    """|Hom(G, F)| by backtracking over each connected component of G in BFS order."""
    require_simple(graph)
    adjacency = closed_adjacency(target)
    count = 1
    for component in sorted(nx.connected_components(graph), key=min):
        _check_guard(len(adjacency), len(component), guard, allow_large, "homomorphism oracle")
        count *= _component_homs(graph, component, adjacency)
        if not count:
            break
    logger.debug(f"|Hom(G, F)| = {count}")
    return count


def independent_sets_exact(
    graph: nx.Graph, limit: int = DEFAULT_INDEPENDENT_SET_LIMIT, allow_large: bool = False
) -> int:
    """|I(G)| including the empty set, by branching on a maximum degree vertex."""
    require_simple(graph)
    vertices = sorted(graph.nodes)
    if len(vertices) > limit and not allow_large:
        raise ResourceGuardError(
            f"independent set oracle is limited to {limit} vertices, graph has {len(vertices)}"
        )
    bit = {v: 1 << index for index, v in enumerate(vertices)}
    closed = [
        bit[v] | functools.reduce(int.__or__, (bit[u] for u in graph.adj[v]), 0) for v in vertices
    ]

    @functools.cache
    def count(remaining: int) -> int:
        best, best_degree = -1, -1
        for index in range(len(vertices)):
            if remaining >> index & 1:
                degree = (closed[index] & remaining).bit_count() - 1
                if degree > best_degree:
                    best, best_degree = index, degree
        if best_degree <= 0:
            return 1 << remaining.bit_count()
        without = remaining & ~(1 << best)
        return count(without) + count(without & ~closed[best])

    return count((1 << len(vertices)) - 1)


def hom_complete_bipartite(
    a: int, b: int, target: nx.Graph, guard: int = DEFAULT_HOM_GUARD, allow_large: bool = False
) -> int:
    """|Hom(K_{a,b}, F)| = Σ over a-tuples u of |common neighbourhood of u|^b."""
    if a < 0 or b < 0:
        raise PreconditionError(f"K_{{{a},{b}}} needs nonnegative sides")
    adjacency = closed_adjacency(target)
    _check_guard(len(adjacency), a, guard, allow_large, "complete bipartite count")
    everything = frozenset(adjacency)
    total = 0
    for tuple_ in itertools.product(adjacency, repeat=a):
        neighbourhoods = (adjacency[u] for u in tuple_)
        common = functools.reduce(frozenset.intersection, neighbourhoods, everything)
        total += len(common) ** b
    return total


class HomBound(NamedTuple):
    log2: float
    factors: Mapping[int, int]
    isolated: int

    @property
    def value(self) -> float:
        return 2.0**self.log2


def hom_bound(
    graph: nx.Graph, target: nx.Graph, guard: int = DEFAULT_HOM_GUARD, allow_large: bool = False
) -> HomBound:
    """Π_v |Hom(K_{p(v),p(v)}, F)|^{1/d(v)}, times |V(F)| per isolated vertex of G."""
    ordering = degree_ordering(graph)
    isolated = [v for v in ordering.order if ordering.degrees[v] == 0]
    size = target.number_of_nodes()
    log2 = 0.0
    if isolated:
        log2 = len(isolated) * math.log2(size) if size else -math.inf

    factors = {}
    for v in ordering.order:
        if ordering.degrees[v] == 0:
            continue
        p = ordering.p_values[v]
        factors[v] = count = hom_complete_bipartite(p, p, target, guard, allow_large)
        log2 += math.log2(count) / ordering.degrees[v] if count else -math.inf
    logger.debug(f"Hom bound factors {factors}, {len(isolated)} isolated vertices")
    return HomBound(log2, factors, len(isolated))


class IndependentSetBound(NamedTuple):
    log2: float

    @property
    def value(self) -> float:
        return 2.0**self.log2


def independent_set_bound(graph: nx.Graph) -> IndependentSetBound:
    """Π_v 2^{(p(v)+1)/d(v)}, with a factor 2 per isolated vertex."""
    ordering = degree_ordering(graph)
    log2 = sum(
        (ordering.p_values[v] + 1) / d if (d := ordering.degrees[v]) else 1.0
        for v in ordering.order
    )
    return IndependentSetBound(log2)


def coloring_bound(
    graph: nx.Graph, r: int, guard: int = DEFAULT_HOM_GUARD, allow_large: bool = False
) -> HomBound:
    if r < 2:
        raise PreconditionError(f"colouring bound needs at least 2 colours, got {r}")
    return hom_bound(graph, complete_graph(r), guard, allow_large)


def is_regular_graph(graph: nx.Graph) -> tuple[bool, int | None]:
    """Whether every vertex has the same degree d >= 1, and that d."""
    degrees = {d for _, d in graph.degree}
    if len(degrees) == 1 and 0 not in degrees:
        return True, degrees.pop()
    return False, None


def regular_independent_set_cap(graph: nx.Graph) -> IndependentSetBound:
    """2^{n/2 + n/d} for a d-regular graph."""
    require_simple(graph)
    regular, d = is_regular_graph(graph)
    if not regular or d is None:
        degrees = sorted({degree for _, degree in graph.degree})
        raise PreconditionError(f"graph is not d-regular with d >= 1, degrees {degrees}")
    n = graph.number_of_nodes()
    return IndependentSetBound(n / 2 + n / d)


def graph_from_dict(data: Mapping[str, Any]) -> nx.Graph:
    data = validate(GRAPH_SCHEMA, data, "graph")
    try:
        return make_graph(data["n"], data["edges"], data["loops"])
    except PreconditionError as err:
        raise InputParseError(f"invalid graph: {err}") from err


def graph_to_dict(graph: nx.Graph) -> dict[str, Any]:
    edges = sorted(tuple(sorted((u, v))) for u, v in graph.edges if u != v)
    return {
        "n": graph.number_of_nodes(),
        "edges": [list(edge) for edge in edges],
        "loops": sorted(v for v, _ in nx.selfloop_edges(graph)),
    }
