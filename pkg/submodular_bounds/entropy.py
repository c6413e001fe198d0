"""Discrete joint distributions and their entropy set functions.

Probabilities are exact rationals and marginals are computed exactly; only the
logarithms are floating point. Coordinates are 1-based, symbols 0-based.
"""

import dataclasses
import enum
import itertools
import math
import random
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from logging import getLogger
from math import comb
from typing import Any, NamedTuple

from .const import DEFAULT_ENTROPY_POWER_EXPONENT, DEFAULT_TOLERANCE
from .exceptions import InequalityViolation, InputParseError, OverlapError, PreconditionError
from .hypergraph import Hypergraph, Weighting, WeightingClass, require_class
from .schemas import DISTRIBUTION_SCHEMA, validate
from .setfn import GroundOrder, SetFunction, k_set_gaps
from .setfn.base import submodularity_deficit
from .utils import from_mask, full_mask, parse_rational, to_mask

logger = getLogger(__name__)

Outcome = tuple[int, ...]


class Units(enum.StrEnum):
    NATS = "e"
    BITS = "2"

    def convert(self, nats: float) -> float:
        return nats if self is Units.NATS else nats / math.log(2)


class EntropyValue(NamedTuple):
    value: float
    units: Units = Units.NATS

    def __float__(self) -> float:
        return self.value


@dataclasses.dataclass(frozen=True)
class JointDistribution:
    alphabet_sizes: tuple[int, ...]
    pmf: Mapping[Outcome, Fraction]
    _marginals: dict[int, dict[Outcome, Fraction]] = dataclasses.field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        sizes = tuple(self.alphabet_sizes)
        if any(size < 1 for size in sizes):
            raise PreconditionError(f"alphabet sizes must be positive, got {sizes}")
        pmf: dict[Outcome, Fraction] = {}
        for x, p in self.pmf.items():
            x = tuple(x)
            if len(x) != len(sizes) or any(not 0 <= v < a for v, a in zip(x, sizes)):
                raise PreconditionError(f"outcome {x} outside the alphabet {sizes}")
            if x in pmf:
                raise PreconditionError(f"outcome {x} listed twice")
            p = parse_rational(p)
            if p < 0:
                raise PreconditionError(f"negative probability {p} at {x}")
            if p:
                pmf[x] = p
        if (total := sum(pmf.values(), Fraction(0))) != 1:
            raise PreconditionError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "alphabet_sizes", sizes)
        object.__setattr__(self, "pmf", dict(sorted(pmf.items())))

    @property
    def n(self) -> int:
        return len(self.alphabet_sizes)

    @property
    def support(self) -> tuple[Outcome, ...]:
        return tuple(self.pmf)

    def marginal_masses(self, mask: int) -> dict[Outcome, Fraction]:
        if (cached := self._marginals.get(mask)) is not None:
            return cached
        coordinates = [i - 1 for i in from_mask(mask)]
        masses: dict[Outcome, Fraction] = defaultdict(Fraction)
        for x, p in self.pmf.items():
            masses[tuple(x[c] for c in coordinates)] += p
        self._marginals[mask] = result = dict(masses)
        return result

    def probability(self, x: Outcome) -> Fraction:
        return self.pmf.get(tuple(x), Fraction(0))


def marginal(distribution: JointDistribution, subset: Iterable[int]) -> JointDistribution:
    mask = to_mask(subset, distribution.n)
    sizes = tuple(distribution.alphabet_sizes[i - 1] for i in from_mask(mask))
    return JointDistribution(sizes, distribution.marginal_masses(mask))


def _entropy_nats(masses: Iterable[Fraction]) -> float:
    return -sum(float(p) * math.log(p) for p in masses if p)


def _entropy_of_mask(distribution: JointDistribution, mask: int) -> float:
    return _entropy_nats(distribution.marginal_masses(mask).values()) if mask else 0.0


def joint_entropy(
    distribution: JointDistribution, subset: Iterable[int], units: Units = Units.NATS
) -> EntropyValue:
    nats = _entropy_of_mask(distribution, to_mask(subset, distribution.n))
    return EntropyValue(units.convert(nats), units)


def conditional_entropy(
    distribution: JointDistribution,
    subset: Iterable[int],
    given: Iterable[int],
    units: Units = Units.NATS,
) -> EntropyValue:
    s, t = to_mask(subset, distribution.n), to_mask(given, distribution.n)
    if s & t:
        raise OverlapError(f"{from_mask(s)} and {from_mask(t)} overlap")
    nats = _entropy_of_mask(distribution, s | t) - _entropy_of_mask(distribution, t)
    return EntropyValue(units.convert(nats), units)


class EntropySetFunction(SetFunction):
    def __init__(self, distribution: JointDistribution, units: Units = Units.NATS):
        super().__init__(distribution.n, "entropy")
        self.distribution = distribution
        self.units = units

    def _evaluate(self, mask: int) -> float:
        return self.units.convert(_entropy_of_mask(self.distribution, mask))


class ConditionalEntropySetFunction(SetFunction):
    """ē(s) = H(X_s | X_<s) under a fixed order."""

    def __init__(
        self, distribution: JointDistribution, order: GroundOrder, units: Units = Units.NATS
    ):
        super().__init__(distribution.n, "conditional entropy")
        self.distribution = distribution
        self.order = order
        self.units = units

    def _evaluate(self, mask: int) -> float:
        before = self.order.preceding(mask)
        nats = _entropy_of_mask(self.distribution, mask | before) - _entropy_of_mask(
            self.distribution, before
        )
        return self.units.convert(nats)


def entropy_set_function(
    distribution: JointDistribution, units: Units = Units.NATS
) -> EntropySetFunction:
    return EntropySetFunction(distribution, units)


def conditional_entropy_set_function(
    distribution: JointDistribution, order: GroundOrder | None = None, units: Units = Units.NATS
) -> ConditionalEntropySetFunction:
    return ConditionalEntropySetFunction(
        distribution, order or GroundOrder.natural(distribution.n), units
    )


# ----- constructors -----


def product_distribution(marginals: Sequence[Sequence[Any]]) -> JointDistribution:
    exact = [[parse_rational(p) for p in row] for row in marginals]
    pmf = {}
    for x in itertools.product(*(range(len(row)) for row in exact)):
        p = math.prod((row[v] for row, v in zip(exact, x)), start=Fraction(1))
        if p:
            pmf[x] = p
    return JointDistribution(tuple(len(row) for row in exact), pmf)


def point_mass(alphabet_sizes: Sequence[int], x: Outcome) -> JointDistribution:
    return JointDistribution(tuple(alphabet_sizes), {tuple(x): Fraction(1)})


def uniform_on(alphabet_sizes: Sequence[int], outcomes: Iterable[Outcome]) -> JointDistribution:
    support = [tuple(x) for x in outcomes]
    return JointDistribution(tuple(alphabet_sizes), {x: Fraction(1, len(support)) for x in support})


def random_distribution(
    alphabet_sizes: Sequence[int], rng: random.Random, zero_chance: float = 0.3
) -> JointDistribution:
    """Random rational PMF over the full product alphabet; some outcomes get zero mass."""
    outcomes = list(itertools.product(*(range(a) for a in alphabet_sizes)))
    weights = [0 if rng.random() < zero_chance else rng.randint(1, 6) for _ in outcomes]
    if not any(weights):
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    return JointDistribution(
        tuple(alphabet_sizes),
        {x: Fraction(w, total) for x, w in zip(outcomes, weights) if w},
    )


def distribution_from_dict(data: Mapping[str, Any]) -> JointDistribution:
    data = validate(DISTRIBUTION_SCHEMA, data, "distribution")
    pmf: dict[Outcome, Fraction] = {}
    for entry in data["pmf"]:
        x = tuple(entry["x"])
        if x in pmf:
            raise InputParseError(f"invalid distribution: outcome {x} listed twice")
        pmf[x] = entry["p"]
    try:
        return JointDistribution(tuple(data["alphabet_sizes"]), pmf)
    except PreconditionError as err:
        raise InputParseError(f"invalid distribution: {err}") from err


def distribution_to_dict(distribution: JointDistribution) -> dict[str, Any]:
    return {
        "alphabet_sizes": list(distribution.alphabet_sizes),
        "pmf": [{"x": list(x), "p": str(p)} for x, p in distribution.pmf.items()],
    }


# ----- derived quantities -----


def erasure_entropy(distribution: JointDistribution, units: Units = Units.NATS) -> EntropyValue:
    """Σ_i H(X_i | all other coordinates)."""
    everything = full_mask(distribution.n)
    total = _entropy_of_mask(distribution, everything)
    nats = sum(
        total - _entropy_of_mask(distribution, everything & ~(1 << i))
        for i in range(distribution.n)
    )
    return EntropyValue(units.convert(nats), units)


def multi_information(distribution: JointDistribution, units: Units = Units.NATS) -> float:
    """D(P || P_1 x ... x P_n) summed directly over the support."""
    singles = [distribution.marginal_masses(1 << i) for i in range(distribution.n)]
    nats = 0.0
    for x, p in distribution.pmf.items():
        product = math.prod((singles[i][(v,)] for i, v in enumerate(x)), start=Fraction(1))
        nats += float(p) * math.log(p / product)
    return units.convert(nats)


class Correlations(NamedTuple):
    total: float
    dual_total: float


def correlations(
    distribution: JointDistribution, k: int, units: Units = Units.NATS
) -> Correlations:
    gaps = k_set_gaps(entropy_set_function(distribution, units), k)
    return Correlations(gaps.upper, gaps.lower)


class HanAverages(NamedTuple):
    """Per-element averages over k-sets for k = 1..n."""

    upper: tuple[float, ...]
    lower: tuple[float, ...]


def han_averages(distribution: JointDistribution, units: Units = Units.NATS) -> HanAverages:
    n = distribution.n
    f = entropy_set_function(distribution, units)
    everything = full_mask(n)
    upper, lower = [], []
    for k in range(1, n + 1):
        masks = [to_mask(s, n) for s in itertools.combinations(range(1, n + 1), k)]
        upper.append(sum(f.value(m) for m in masks) / (k * comb(n, k)))
        lower.append(
            sum(f.total - f.value(everything & ~m) for m in masks) / (k * comb(n, k))
        )
    return HanAverages(tuple(upper), tuple(lower))


class EntropyPowerBound(NamedTuple):
    lhs: float
    rhs: float
    weights: tuple[Fraction, ...]


def _entropy_power(entropy_nats: float, size: int, exponent: float) -> float:
    return math.exp(exponent * entropy_nats / size)


def entropy_power_bound(
    distribution: JointDistribution,
    hypergraph: Hypergraph,
    weighting: Weighting,
    exponent: float = DEFAULT_ENTROPY_POWER_EXPONENT,
    tolerance: float = DEFAULT_TOLERANCE,
) -> EntropyPowerBound:
    """N_c(X_[n]) against Σ w_s N_c(X_s) with w_s = γ(s)|s|/n."""
    if exponent <= 0:
        raise PreconditionError(f"entropy power exponent must be positive, got {exponent}")
    require_class(hypergraph, weighting, WeightingClass.PARTITION)
    n = distribution.n
    weights = tuple(w * len(edge) / n for edge, w in zip(hypergraph.edges, weighting))
    assert sum(weights) == 1, f"entropy power weights sum to {sum(weights)}"

    lhs = _entropy_power(_entropy_of_mask(distribution, full_mask(n)), n, exponent)
    rhs = sum(
        float(w) * _entropy_power(_entropy_of_mask(distribution, mask), len(edge), exponent)
        for edge, mask, w in zip(hypergraph.edges, hypergraph.masks, weights)
    )
    if lhs > rhs + tolerance * max(1.0, rhs):
        raise InequalityViolation(f"entropy power {lhs} exceeds its fractional bound {rhs}")
    return EntropyPowerBound(lhs, rhs, weights)


def entropy_power_monotonicity(
    distribution: JointDistribution,
    exponent: float = DEFAULT_ENTROPY_POWER_EXPONENT,
    tolerance: float = DEFAULT_TOLERANCE,
) -> tuple[float, ...]:
    """Averages of N_c(X_s) over the (n - m)-subsets for m = 0..n-1.

    Smaller subsets carry more entropy per element, so the sequence is
    nondecreasing in m.
    """
    if exponent <= 0:
        raise PreconditionError(f"entropy power exponent must be positive, got {exponent}")
    n = distribution.n
    sequence = []
    for m in range(n):
        size = n - m
        powers = [
            _entropy_power(_entropy_of_mask(distribution, to_mask(s, n)), size, exponent)
            for s in itertools.combinations(range(1, n + 1), size)
        ]
        sequence.append(sum(powers) / comb(n, m))
    for m, (a, b) in enumerate(itertools.pairwise(sequence)):
        if b < a - tolerance * max(1.0, a):
            raise InequalityViolation(f"entropy power average drops from {a} to {b} at m={m + 1}")
    return tuple(sequence)


class Counterexample(NamedTuple):
    distribution: JointDistribution
    s: tuple[int, ...]
    t: tuple[int, ...]
    deficit: float
    determined: float
    undetermined: float


def conditional_entropy_counterexample(units: Units = Units.NATS) -> Counterexample:
    """X1, X2, X3 independent fair bits and X4 = X2.

    The conditional entropy set function ē(s) = H(X_s | X_<s) then has
    ē(s) + ē(t) < ē(s ∪ t) + ē(s ∩ t) for s = {1,3}, t = {3,4}, because
    H(X4 | X1 X2 X3) = 0 while H(X4 | X1 X3) is one bit.
    """
    bits = itertools.product((0, 1), repeat=3)
    distribution = uniform_on((2, 2, 2, 2), ((a, b, c, b) for a, b, c in bits))
    determined = conditional_entropy(distribution, (4,), (1, 2, 3), units).value
    undetermined = conditional_entropy(distribution, (4,), (1, 3), units).value
    s, t = (1, 3), (3, 4)
    f = conditional_entropy_set_function(distribution, units=units)
    deficit = submodularity_deficit(f, s, t)
    assert deficit > 0, "conditional entropy pair should violate submodularity"
    logger.info(f"H(X4|X123) = {determined}, H(X4|X13) = {undetermined}, deficit {deficit}")
    return Counterexample(distribution, s, t, float(deficit), determined, undetermined)
