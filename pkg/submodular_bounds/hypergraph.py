"""Hypergraphs on the ground set [n] and fractional weightings of their edges.

Indices are 1-based everywhere in the public API. Edges are stored as sorted
tuples; repeated edges are kept by position because weightings are positional.
All weighting arithmetic uses exact rationals.
"""

import dataclasses
import enum
import itertools
import random
from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from functools import cached_property
from logging import getLogger
from math import comb
from typing import Any, NamedTuple

from .exceptions import (
    ClassificationError,
    NotQuasiregularError,
    NotRegularError,
    PreconditionError,
    UncoveredIndexError,
)
from .schemas import HYPERGRAPH_SCHEMA, WEIGHTING_SCHEMA, validate
from .utils import format_subset, parse_rational, to_mask

logger = getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"ground set size must be positive, got {self.n}")
        normalized = []
        for position, edge in enumerate(self.edges):
            members = tuple(sorted(set(edge)))
            if not members:
                raise PreconditionError(f"edge #{position} is empty")
            to_mask(members, self.n)
            normalized.append(members)
        object.__setattr__(self, "edges", tuple(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(n, tuple(tuple(edge) for edge in edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(to_mask(edge, self.n) for edge in self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Degree of every index, position i-1 for index i."""
        counts = [0] * self.n
        for edge in self.edges:
            for i in edge:
                counts[i - 1] += 1
        return tuple(counts)

    def uncovered(self) -> list[int]:
        return [i for i, r in enumerate(self.degrees, start=1) if r == 0]

    def require_covered(self) -> None:
        if missing := self.uncovered():
            raise UncoveredIndexError(missing[0])

    def __str__(self) -> str:
        return f"[{self.n}]: " + " ".join(format_subset(edge) for edge in self.edges)


@dataclasses.dataclass(frozen=True)
class Weighting:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(parse_rational(value) for value in self.values)
        for position, value in enumerate(values):
            if value < 0:
                raise ClassificationError(f"edge #{position} has negative weight {value}")
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, values: Iterable[Any]) -> "Weighting":
        return cls(tuple(values))

    @classmethod
    def uniform(cls, size: int, value: Fraction | int = 1) -> "Weighting":
        return cls((Fraction(value),) * size)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, position: int) -> Fraction:
        return self.values[position]

    def scaled(self, factor: Fraction) -> "Weighting":
        return Weighting(tuple(value * factor for value in self.values))

    def __str__(self) -> str:
        return "(" + ", ".join(str(value) for value in self.values) + ")"


class WeightingClass(enum.StrEnum):
    COVERING = "covering"
    PACKING = "packing"
    PARTITION = "partition"
    NEITHER = "neither"

    @property
    def is_covering(self) -> bool:
        return self in (WeightingClass.COVERING, WeightingClass.PARTITION)

    @property
    def is_packing(self) -> bool:
        return self in (WeightingClass.PACKING, WeightingClass.PARTITION)


class DegreeRange(NamedTuple):
    r_minus: int
    r_plus: int


class RegularComponent(NamedTuple):
    vertices: tuple[int, ...]
    degree: int
    edge_positions: tuple[int, ...]
    hypergraph: Hypergraph


class WeightedSums(NamedTuple):
    weighted: Fraction
    total: Fraction
    weighting_class: WeightingClass


def degree(hypergraph: Hypergraph, i: int) -> int:
    if not 1 <= i <= hypergraph.n:
        raise PreconditionError(f"index {i} outside ground set [1..{hypergraph.n}]")
    return hypergraph.degrees[i - 1]


def min_max_degree_in(hypergraph: Hypergraph, subset: Iterable[int]) -> DegreeRange:
    members = tuple(subset)
    if not members:
        raise PreconditionError("degree range of an empty subset is undefined")
    degrees = [degree(hypergraph, i) for i in members]
    for i, r in zip(members, degrees):
        if r == 0:
            raise UncoveredIndexError(i)
    return DegreeRange(min(degrees), max(degrees))


def _check_aligned(hypergraph: Hypergraph, weighting: Weighting) -> None:
    if len(weighting) != len(hypergraph):
        raise PreconditionError(
            f"weighting has {len(weighting)} values but the hypergraph has {len(hypergraph)} edges"
        )


def incident_sums(hypergraph: Hypergraph, weighting: Weighting) -> tuple[Fraction, ...]:
    _check_aligned(hypergraph, weighting)
    sums = [Fraction(0)] * hypergraph.n
    for edge, value in zip(hypergraph.edges, weighting.values):
        for i in edge:
            sums[i - 1] += value
    return tuple(sums)


def classify_weighting(hypergraph: Hypergraph, weighting: Weighting) -> WeightingClass:
    sums = incident_sums(hypergraph, weighting)
    covering = all(total >= 1 for total in sums)
    packing = all(total <= 1 for total in sums)
    if covering and packing:
        return WeightingClass.PARTITION
    if covering:
        return WeightingClass.COVERING
    if packing:
        return WeightingClass.PACKING
    return WeightingClass.NEITHER


def require_class(
    hypergraph: Hypergraph, weighting: Weighting, required: WeightingClass
) -> WeightingClass:
    """Classify and raise with the first offending index unless the class satisfies required."""
    found = classify_weighting(hypergraph, weighting)
    satisfied = {
        WeightingClass.PARTITION: found is WeightingClass.PARTITION,
        WeightingClass.COVERING: found.is_covering,
        WeightingClass.PACKING: found.is_packing,
        WeightingClass.NEITHER: True,
    }[required]
    if satisfied:
        return found

    for i, total in enumerate(incident_sums(hypergraph, weighting), start=1):
        if (required.is_covering and total < 1) or (required.is_packing and total > 1):
            raise ClassificationError(
                f"weighting is not a fractional {required}: index {i} has incident sum {total}",
                index=i,
                incident_sum=total,
            )
    raise AssertionError(f"classification {found} disagrees with incident sums")


def degree_covering(hypergraph: Hypergraph) -> Weighting:
    hypergraph.require_covered()
    return Weighting(
        tuple(Fraction(1, min_max_degree_in(hypergraph, edge).r_minus) for edge in hypergraph)
    )


def degree_packing(hypergraph: Hypergraph) -> Weighting:
    hypergraph.require_covered()
    return Weighting(
        tuple(Fraction(1, min_max_degree_in(hypergraph, edge).r_plus) for edge in hypergraph)
    )


def is_quasiregular(hypergraph: Hypergraph) -> bool:
    degrees = hypergraph.degrees
    return all(len({degrees[i - 1] for i in edge}) == 1 for edge in hypergraph)


def is_regular(hypergraph: Hypergraph) -> tuple[bool, int | None]:
    distinct = set(hypergraph.degrees)
    if len(distinct) == 1:
        return True, distinct.pop()
    return False, None


def require_regular(hypergraph: Hypergraph) -> int:
    regular, r = is_regular(hypergraph)
    if not regular or not r:
        raise NotRegularError(f"hypergraph is not regular, degrees {hypergraph.degrees}")
    return r


def degree_partition(hypergraph: Hypergraph) -> Weighting:
    """The common degree weighting of a quasiregular hypergraph, a fractional partition."""
    if not is_quasiregular(hypergraph):
        raise NotQuasiregularError("degree covering and packing differ off quasiregular input")
    return degree_covering(hypergraph)


def quasiregular_decomposition(hypergraph: Hypergraph) -> list[RegularComponent]:
    if not is_quasiregular(hypergraph):
        raise NotQuasiregularError("hypergraph is not quasiregular")

    degrees = hypergraph.degrees
    components = []
    for r in sorted({r for r in degrees if r}, reverse=True):
        vertices = tuple(i for i, d in enumerate(degrees, start=1) if d == r)
        positions = tuple(
            position for position, edge in enumerate(hypergraph.edges) if degrees[edge[0] - 1] == r
        )
        sub = Hypergraph(hypergraph.n, tuple(hypergraph.edges[p] for p in positions))
        assert all(sub.degrees[i - 1] == r for i in vertices), f"class {vertices} not {r}-regular"
        components.append(RegularComponent(vertices, r, positions, sub))
    logger.debug(f"Quasiregular decomposition into degrees {[c.degree for c in components]}")
    return components


def require_proper_edges(hypergraph: Hypergraph) -> None:
    """Complements are taken edge by edge, so no edge may be all of [n]."""
    for edge in hypergraph:
        if len(edge) == hypergraph.n:
            raise PreconditionError(f"edge {format_subset(edge)} is the whole ground set")


def complement_hypergraph(hypergraph: Hypergraph) -> Hypergraph:
    require_proper_edges(hypergraph)
    ground = set(range(1, hypergraph.n + 1))
    complements = tuple(tuple(sorted(ground.difference(edge))) for edge in hypergraph)
    return Hypergraph(hypergraph.n, complements)


def total_weight(weighting: Weighting) -> Fraction:
    return sum(weighting.values, Fraction(0))


def dual_weighting(hypergraph: Hypergraph, weighting: Weighting) -> Weighting:
    """Weighting on the complement hypergraph with every value divided by w - 1."""
    _check_aligned(hypergraph, weighting)
    weight = total_weight(weighting)
    if weight <= 1:
        raise PreconditionError(f"dual weighting needs total weight above 1, got {weight}")
    require_proper_edges(hypergraph)
    return weighting.scaled(1 / (weight - 1))


def dual_hypergraph(hypergraph: Hypergraph) -> Hypergraph:
    """Transposed incidence system: edge j becomes index j, index i becomes the set of its edges."""
    if not len(hypergraph):
        raise PreconditionError("dual of a hypergraph without edges is empty")
    hypergraph.require_covered()
    incident = [
        tuple(position for position, edge in enumerate(hypergraph.edges, start=1) if i in edge)
        for i in range(1, hypergraph.n + 1)
    ]
    return Hypergraph(len(hypergraph), tuple(incident))


class CollectionKind(enum.StrEnum):
    K_SETS = "k-sets"
    SINGLETONS = "singletons"
    CONSECUTIVE = "consecutive"
    ALL_MINUS_ONE = "leave-one-out"


def k_sets(n: int, k: int) -> Hypergraph:
    if not 1 <= k <= n:
        raise PreconditionError(f"k={k} out of range [1..{n}]")
    return Hypergraph(n, tuple(itertools.combinations(range(1, n + 1), k)))


def consecutive(n: int, k: int) -> Hypergraph:
    if not 1 <= k <= n:
        raise PreconditionError(f"k={k} out of range [1..{n}]")
    return Hypergraph(n, tuple(tuple(range(j, min(j + k - 1, n) + 1)) for j in range(1, n + 1)))


def standard_collection(kind: CollectionKind | str, n: int, k: int | None = None) -> Hypergraph:
    kind = CollectionKind(kind)
    match kind:
        case CollectionKind.SINGLETONS:
            return k_sets(n, 1)
        case CollectionKind.ALL_MINUS_ONE:
            if n < 2:
                raise PreconditionError("leave-one-out collection needs n >= 2")
            return k_sets(n, n - 1)
        case CollectionKind.K_SETS | CollectionKind.CONSECUTIVE:
            if k is None:
                raise PreconditionError(f"{kind} collection needs k")
            return k_sets(n, k) if kind is CollectionKind.K_SETS else consecutive(n, k)


def k_set_count(n: int, k: int) -> int:
    return comb(n, k)


def weighted_subset_sums(
    values: Sequence[Any], hypergraph: Hypergraph, weighting: Weighting
) -> WeightedSums:
    """Fractional additivity: Σ_s w(s) Σ_{i in s} a_i against Σ_i a_i.

    The weighted sum is at most the total for packings, at least for coverings
    and equal for partitions. The direction is asserted.
    """
    a = tuple(parse_rational(value) for value in values)
    if len(a) != hypergraph.n:
        raise PreconditionError(f"vector has length {len(a)}, expected {hypergraph.n}")
    if any(value < 0 for value in a):
        raise PreconditionError("fractional additivity needs a nonnegative vector")

    weighted = Fraction(0)
    for edge, value in zip(hypergraph, weighting):
        weighted += value * sum((a[i - 1] for i in edge), Fraction(0))
    total = sum(a, Fraction(0))
    weighting_class = classify_weighting(hypergraph, weighting)
    if weighting_class.is_covering:
        assert weighted >= total, f"covering sum {weighted} below total {total}"
    if weighting_class.is_packing:
        assert weighted <= total, f"packing sum {weighted} above total {total}"
    return WeightedSums(weighted, total, weighting_class)


def neighborhood_hypergraph(left: int, left_degree: int, right: int) -> Hypergraph:
    """Neighbourhoods of a bi-regular bipartite graph, V1 = [1..left] and V2 the next `right`.

    Vertex i of V1 is joined to left_degree consecutive vertices of V2 taken
    cyclically, so every vertex of V2 has degree left * left_degree / right.
    """
    if not 1 <= left_degree <= right or (left * left_degree) % right:
        raise PreconditionError(
            f"no bi-regular graph with |V1|={left}, r1={left_degree}, |V2|={right}"
        )
    neighbours: dict[int, set[int]] = {v: set() for v in range(1, left + right + 1)}
    for i in range(left):
        for j in range(left_degree):
            u, w = i + 1, left + 1 + (i * left_degree + j) % right
            neighbours[u].add(w)
            neighbours[w].add(u)
    return Hypergraph(left + right, tuple(tuple(neighbours[v]) for v in sorted(neighbours)))


def random_hypergraph(n: int, m: int, rng: random.Random) -> Hypergraph:
    """m random nonempty edges, grown until every index is covered."""
    edges = [
        [i for i in range(1, n + 1) if rng.random() < 0.5] or [rng.randint(1, n)]
        for _ in range(max(m, 1))
    ]
    covered = {i for edge in edges for i in edge}
    for i in range(1, n + 1):
        if i not in covered:
            edges[rng.randrange(len(edges))].append(i)
    return Hypergraph.from_edges(n, edges)


def hypergraph_from_dict(data: Mapping[str, Any]) -> Hypergraph:
    data = validate(HYPERGRAPH_SCHEMA, data, "hypergraph")
    return Hypergraph.from_edges(data["n"], data["edges"])


def hypergraph_to_dict(hypergraph: Hypergraph) -> dict[str, Any]:
    return {"n": hypergraph.n, "edges": [list(edge) for edge in hypergraph]}


def weighting_from_dict(data: Mapping[str, Any]) -> Weighting:
    data = validate(WEIGHTING_SCHEMA, data, "weighting")
    return Weighting.of(data["weights"])


def weighting_to_dict(weighting: Weighting) -> dict[str, Any]:
    return {"weights": [str(value) for value in weighting]}
