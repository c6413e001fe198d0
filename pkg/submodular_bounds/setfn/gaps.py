"""Gaps between f([n]) and its weak bounds, their duality and their monotonicity."""

import itertools
import random
from fractions import Fraction
from logging import getLogger
from math import comb
from typing import NamedTuple

from ..const import DEFAULT_ENUMERATION_LIMIT, DEFAULT_TOLERANCE
from ..exceptions import PreconditionError
from ..hypergraph import (
    Hypergraph,
    Weighting,
    WeightingClass,
    complement_hypergraph,
    dual_weighting,
    random_hypergraph,
    require_class,
    require_regular,
    total_weight,
)
from ..lp import random_fractional_partition
from ..utils import full_mask, to_mask
from .base import SetFunction, Value, check_enumerable, conditional_mask

logger = getLogger(__name__)


class WeakGaps(NamedTuple):
    upper: Value
    lower: Value


class GapDuality(NamedTuple):
    lhs: Value
    rhs: Value
    weight: Fraction
    dual_weight: Fraction

    def agrees(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return abs(self.lhs - self.rhs) <= tolerance


class RegularGaps(NamedTuple):
    lower_complement: Value
    upper: Value
    r: int
    edge_count: int

    @property
    def predicted_ratio(self) -> Fraction:
        return Fraction(self.r, self.edge_count - self.r)

    def agrees(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        """g_L(f, S̄)·(|S| - r) = r·g_U(f, S), compared without division."""
        scaled_lower = self.lower_complement * (self.edge_count - self.r)
        return abs(scaled_lower - self.r * self.upper) <= tolerance


class GapSequences(NamedTuple):
    upper: tuple[Value, ...]
    lower: tuple[Value, ...]

    def nonincreasing(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return all(
            b <= a + tolerance
            for sequence in (self.upper, self.lower)
            for a, b in itertools.pairwise(sequence)
        )

    def terminates_at_zero(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return abs(self.upper[-1]) <= tolerance and abs(self.lower[-1]) <= tolerance


def weak_gaps(f: SetFunction, hypergraph: Hypergraph, weighting: Weighting) -> WeakGaps:
    """Σ γ(s) f(s) - f([n]) and f([n]) - Σ γ(s) f(s | s^c), without admissibility checks."""
    everything = full_mask(f.n)
    upper: Value = 0
    lower: Value = 0
    for mask, weight in zip(hypergraph.masks, weighting):
        upper += weight * f.value(mask)
        lower += weight * conditional_mask(f, mask, everything & ~mask)
    return WeakGaps(upper - f.total, f.total - lower)


def gap_duality_check(f: SetFunction, hypergraph: Hypergraph, weighting: Weighting) -> GapDuality:
    """Upper gap over w(γ) on the hypergraph against lower gap over w(γ̄) on its complement."""
    require_class(hypergraph, weighting, WeightingClass.PARTITION)
    complement = complement_hypergraph(hypergraph)
    dual = dual_weighting(hypergraph, weighting)
    weight, dual_weight = total_weight(weighting), total_weight(dual)
    assert dual_weight == weight / (weight - 1), "dual weight is w/(w-1)"

    upper_gap = weak_gaps(f, hypergraph, weighting).upper
    lower_gap = weak_gaps(f, complement, dual).lower
    result = GapDuality(upper_gap / weight, lower_gap / dual_weight, weight, dual_weight)
    logger.debug(f"Gap duality: {result.lhs} against {result.rhs}")
    return result


def regular_gap_pair(f: SetFunction, hypergraph: Hypergraph) -> RegularGaps:
    """Gaps of an r-regular collection and of its complement, whose ratio is r/(|S| - r)."""
    r = require_regular(hypergraph)
    if len(hypergraph) <= r:
        raise PreconditionError("an r-regular collection with r edges has no proper complement")
    complement = complement_hypergraph(hypergraph)
    upper = weak_gaps(f, hypergraph, Weighting.uniform(len(hypergraph), Fraction(1, r))).upper
    lower = weak_gaps(
        f, complement, Weighting.uniform(len(hypergraph), Fraction(1, len(hypergraph) - r))
    ).lower
    return RegularGaps(lower, upper, r, len(hypergraph))


def k_set_gaps(f: SetFunction, k: int) -> WeakGaps:
    """Weak gaps of all k-subsets under their degree partition 1/C(n-1, k-1)."""
    n = f.n
    if not 1 <= k <= n:
        raise PreconditionError(f"k={k} out of range [1..{n}]")
    everything = full_mask(n)
    scale = comb(n - 1, k - 1)
    plain: Value = 0
    conditioned: Value = 0
    for subset in itertools.combinations(range(1, n + 1), k):
        mask = to_mask(subset, n)
        plain += f.value(mask)
        conditioned += conditional_mask(f, mask, everything & ~mask)
    return WeakGaps(plain / scale - f.total, f.total - conditioned / scale)


def gap_monotonicity_sequence(
    f: SetFunction, limit: int = DEFAULT_ENUMERATION_LIMIT, allow_large: bool = False
) -> GapSequences:
    """g_U(f, S_k) and g_L(f, S_k) for k = 1..n."""
    check_enumerable(f.n, limit, allow_large)
    gaps = [k_set_gaps(f, k) for k in range(1, f.n + 1)]
    sequences = GapSequences(tuple(g.upper for g in gaps), tuple(g.lower for g in gaps))
    logger.debug(f"Gap sequences for {f!r}: {sequences}")
    return sequences


def fractional_subadditivity_check(
    f: SetFunction,
    trials: int,
    rng: random.Random,
    tolerance: float = DEFAULT_TOLERANCE,
) -> bool:
    """Test f([n]) <= Σ γ(s) f(s) on random hypergraphs with random fractional partitions."""
    for trial in range(trials):
        base = random_hypergraph(f.n, rng.randint(1, 2 * f.n), rng)
        hypergraph = Hypergraph(base.n, base.edges + tuple((i,) for i in range(1, f.n + 1)))
        weighting = random_fractional_partition(hypergraph, rng)
        bound = sum((w * f.value(m) for m, w in zip(hypergraph.masks, weighting)), 0)
        if f.total > bound + tolerance:
            logger.warning(f"Trial {trial}: f([n]) = {f.total} exceeds {bound} on {hypergraph}")
            return False
    return True
