"""Relative entropy against a product measure as a supermodular set function."""

import dataclasses
import itertools
import math
import random
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from logging import getLogger
from typing import Any, NamedTuple

from .const import DEFAULT_TENSORIZATION_GUARD, DEFAULT_TOLERANCE
from .entropy import (
    JointDistribution,
    Outcome,
    Units,
    distribution_from_dict,
    product_distribution,
    random_distribution,
)
from .exceptions import (
    AbsoluteContinuityError,
    InequalityViolation,
    OverlapError,
    PreconditionError,
    ResourceGuardError,
)
from .hypergraph import Hypergraph, Weighting, WeightingClass, require_class, require_regular
from .schemas import PAIR_SCHEMA, TENSORIZATION_SCHEMA, validate
from .setfn import (
    GroundOrder,
    NegatedSetFunction,
    SetFunction,
    strong_lower_bound,
    strong_upper_bound,
)
from .utils import from_mask, full_mask, parse_rational, to_mask

logger = getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ProductMeasure:
    marginals: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        marginals = tuple(tuple(parse_rational(q) for q in row) for row in self.marginals)
        for i, row in enumerate(marginals, start=1):
            if not row or any(q < 0 for q in row) or sum(row) != 1:
                raise PreconditionError(f"marginal of coordinate {i} is not a distribution: {row}")
        object.__setattr__(self, "marginals", marginals)

    @property
    def n(self) -> int:
        return len(self.marginals)

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.marginals)

    @property
    def size(self) -> int:
        return math.prod(self.alphabet_sizes)

    def mass(self, mask: int, x: Outcome) -> Fraction:
        """Q_s(x_s) where x lists the symbols of the coordinates in s, ascending."""
        return math.prod(
            (self.marginals[i - 1][v] for i, v in zip(from_mask(mask), x)), start=Fraction(1)
        )

    def probability(self, x: Outcome) -> Fraction:
        return self.mass(full_mask(self.n), x)

    def support(self) -> Iterable[Outcome]:
        symbols = [[v for v, q in enumerate(row) if q] for row in self.marginals]
        return itertools.product(*symbols)

    def as_distribution(self) -> JointDistribution:
        return product_distribution(self.marginals)


def _divergence_nats(masses: Mapping[Outcome, Fraction], reference) -> float:
    total = 0.0
    for x, p in masses.items():
        q = reference(x)
        if not q:
            raise AbsoluteContinuityError(f"outcome {x} has mass {p} but reference mass 0")
        total += float(p) * math.log(p / q)
    return total


@dataclasses.dataclass(frozen=True)
class MeasurePair:
    p: JointDistribution
    q: ProductMeasure
    units: Units = Units.NATS

    def __post_init__(self):
        if self.p.alphabet_sizes != self.q.alphabet_sizes:
            raise PreconditionError(
                f"alphabets differ: {self.p.alphabet_sizes} against {self.q.alphabet_sizes}"
            )
        for x, mass in self.p.pmf.items():
            if not self.q.probability(x):
                raise AbsoluteContinuityError(f"P puts mass {mass} on {x} where Q vanishes")

    @property
    def n(self) -> int:
        return self.p.n


def relative_entropy_mask(pair: MeasurePair, mask: int) -> float:
    if not mask:
        return 0.0
    nats = _divergence_nats(pair.p.marginal_masses(mask), lambda x: pair.q.mass(mask, x))
    return pair.units.convert(nats)


def relative_entropy(pair: MeasurePair, subset: Iterable[int]) -> float:
    """d(s) = D(P_s || Q_s)."""
    return relative_entropy_mask(pair, to_mask(subset, pair.n))


def conditional_relative_entropy(
    pair: MeasurePair, subset: Iterable[int], given: Iterable[int] = ()
) -> float:
    """d(s | t) = d(s ∪ t) - d(t)."""
    s, t = to_mask(subset, pair.n), to_mask(given, pair.n)
    if s & t:
        raise OverlapError(f"{from_mask(s)} and {from_mask(t)} overlap")
    return relative_entropy_mask(pair, s | t) - relative_entropy_mask(pair, t)


def divergence(p: JointDistribution, q: JointDistribution, units: Units = Units.NATS) -> float:
    """D(P || Q) for two explicit distributions on the same alphabet."""
    if p.alphabet_sizes != q.alphabet_sizes:
        raise PreconditionError(f"alphabets differ: {p.alphabet_sizes} against {q.alphabet_sizes}")
    return units.convert(_divergence_nats(p.pmf, q.probability))


class DivergenceSetFunction(SetFunction):
    def __init__(self, pair: MeasurePair):
        super().__init__(pair.n, "divergence")
        self.pair = pair

    def _evaluate(self, mask: int) -> float:
        return relative_entropy_mask(self.pair, mask)


def divergence_set_function(pair: MeasurePair) -> DivergenceSetFunction:
    return DivergenceSetFunction(pair)


def negated_divergence_set_function(pair: MeasurePair) -> NegatedSetFunction:
    return NegatedSetFunction(DivergenceSetFunction(pair))


class DivergenceSandwich(NamedTuple):
    upper_sum: float
    divergence: float
    lower_sum: float

    def holds(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return (
            self.lower_sum <= self.divergence + tolerance
            and self.divergence <= self.upper_sum + tolerance
        )


def divergence_bounds(
    pair: MeasurePair,
    hypergraph: Hypergraph,
    weighting: Weighting,
    order: GroundOrder | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DivergenceSandwich:
    """Σ γ(s) d(s | s^c minus >s) >= D(P||Q) >= Σ γ(s) d(s | <s) for a partition γ."""
    require_class(hypergraph, weighting, WeightingClass.PARTITION)
    negated = negated_divergence_set_function(pair)
    lower_sum = -strong_upper_bound(negated, hypergraph, weighting, order, tolerance)
    upper_sum = -strong_lower_bound(negated, hypergraph, weighting, order, tolerance)
    result = DivergenceSandwich(upper_sum, -negated.total, lower_sum)
    if not result.holds(tolerance):
        raise InequalityViolation(f"divergence sandwich fails: {result}")
    return result


class RegularDivergenceBound(NamedTuple):
    divergence: float
    bound: float
    r: int


def regular_divergence_bound(
    pair: MeasurePair, hypergraph: Hypergraph, tolerance: float = DEFAULT_TOLERANCE
) -> RegularDivergenceBound:
    """D(P||Q) >= (1/r) Σ_s D(P_s||Q_s) for an r-regular collection."""
    r = require_regular(hypergraph)
    bound = sum(relative_entropy_mask(pair, mask) for mask in hypergraph.masks) / r
    total = relative_entropy_mask(pair, full_mask(pair.n))
    if total < bound - tolerance:
        raise InequalityViolation(f"D = {total} is below (1/{r}) Σ D(P_s||Q_s) = {bound}")
    return RegularDivergenceBound(total, bound, r)


# ----- entropy functionals -----


def _check_function(
    measure: ProductMeasure, g: Mapping[Outcome, float], guard: int
) -> list[tuple[Outcome, float, float]]:
    if measure.size > guard:
        raise ResourceGuardError(f"{measure.size} product points exceed the guard {guard}")
    points = []
    for x in measure.support():
        if x not in g:
            raise PreconditionError(f"g is not defined at {x}")
        if (value := g[x]) <= 0:
            raise PreconditionError(f"g must be positive on the support, g{x} = {value}")
        points.append((x, float(measure.probability(x)), float(value)))
    return points


def _ent(points: Iterable[tuple[Outcome, float, float]]) -> float:
    """Unnormalized Ent over a block: B - A log(A / m)."""
    mass = mean = with_log = 0.0
    for _, q, value in points:
        mass += q
        mean += q * value
        with_log += q * value * math.log(value)
    return with_log - mean * math.log(mean / mass)


class Tensorization(NamedTuple):
    lhs: float
    rhs: float
    r: int


def tensorization_check(
    measure: ProductMeasure,
    g: Mapping[Outcome, float],
    hypergraph: Hypergraph,
    tolerance: float = DEFAULT_TOLERANCE,
    guard: int = DEFAULT_TENSORIZATION_GUARD,
) -> Tensorization:
    """Ent_Q(g) <= (1/r) E_Q Σ_s Ent_{Q_s}(g) with the coordinates outside s frozen."""
    r = require_regular(hypergraph)
    if hypergraph.n != measure.n:
        raise PreconditionError(f"hypergraph on [{hypergraph.n}] for a measure on [{measure.n}]")
    points = _check_function(measure, g, guard)
    lhs = _ent(points)

    total = 0.0
    for mask in hypergraph.masks:
        frozen = [i for i in range(measure.n) if not mask >> i & 1]
        blocks: dict[Outcome, list] = defaultdict(list)
        for point in points:
            blocks[tuple(point[0][i] for i in frozen)].append(point)
        total += sum(_ent(block) for block in blocks.values())
    rhs = total / r
    logger.debug(f"Tensorization: Ent = {lhs}, bound = {rhs}")
    if lhs > rhs + tolerance * max(1.0, abs(rhs)):
        raise InequalityViolation(f"Ent_Q(g) = {lhs} exceeds the tensorized bound {rhs}")
    return Tensorization(lhs, rhs, r)


class EntropyIdentity(NamedTuple):
    ent: float
    scaled_divergence: float


def entropy_functional_identity(
    measure: ProductMeasure,
    g: Mapping[Outcome, float],
    guard: int = DEFAULT_TENSORIZATION_GUARD,
) -> EntropyIdentity:
    """Ent_Q(g) alongside (E_Q g)·D(P||Q) for the tilted measure dP/dQ = g / E_Q g."""
    points = _check_function(measure, g, guard)
    mean = sum(q * value for _, q, value in points)
    scaled = mean * sum(
        (q * value / mean) * math.log(value / mean) for _, q, value in points
    )
    return EntropyIdentity(_ent(points), scaled)


def pair_from_dict(data: Mapping[str, Any], units: Units = Units.NATS) -> MeasurePair:
    data = validate(PAIR_SCHEMA, data, "measure pair")
    p = distribution_from_dict(data["p"])
    return MeasurePair(p, ProductMeasure(tuple(tuple(row) for row in data["q_marginals"])), units)


def tensorization_from_dict(data: Mapping[str, Any]) -> tuple[ProductMeasure, dict[Outcome, float]]:
    data = validate(TENSORIZATION_SCHEMA, data, "tensorization input")
    measure = ProductMeasure(tuple(tuple(row) for row in data["q_marginals"]))
    g: dict[Outcome, float] = {}
    for entry in data["g"]:
        x = tuple(entry["x"])
        if x in g:
            raise PreconditionError(f"g is given twice at {x}")
        g[x] = entry["value"]
    return measure, g


def random_product_measure(alphabet_sizes: Sequence[int], rng: random.Random) -> ProductMeasure:
    rows = []
    for size in alphabet_sizes:
        weights = [rng.randint(1, 6) for _ in range(size)]
        rows.append(tuple(Fraction(w, sum(weights)) for w in weights))
    return ProductMeasure(tuple(rows))


def random_pair(alphabet_sizes: Sequence[int], rng: random.Random) -> MeasurePair:
    p = random_distribution(alphabet_sizes, rng)
    return MeasurePair(p, random_product_measure(alphabet_sizes, rng))
