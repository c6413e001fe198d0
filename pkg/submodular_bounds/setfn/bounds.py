"""Fractional upper and lower bounds on f([n]) for a submodular f.

Strong bounds condition each edge on the indices ordered around it; weak bounds
use f(s) and f(s | s^c). Fractional partitions are always accepted. Bare
coverings (upper side) and packings (lower side) are accepted only when the
prefix values f([1]) <= ... <= f([n]) are nondecreasing under the order.
"""

import dataclasses
from collections.abc import Callable
from logging import getLogger
from typing import Any

from ..const import DEFAULT_TOLERANCE
from ..exceptions import ClassificationError, MonotonicityError
from ..hypergraph import (
    Hypergraph,
    Weighting,
    WeightingClass,
    require_class,
)
from ..utils import format_subset, full_mask
from .base import (
    GroundOrder,
    SetFunction,
    Value,
    _check_order,
    conditional_mask,
    prefix_nondecreasing,
)

logger = getLogger(__name__)


def check_bound_weighting(
    f: SetFunction,
    hypergraph: Hypergraph,
    weighting: Weighting,
    required: WeightingClass,
    order: GroundOrder,
    tolerance: float = DEFAULT_TOLERANCE,
) -> WeightingClass:
    """Verify the weighting is admissible for a bound on the given side."""
    if hypergraph.n != f.n:
        raise ClassificationError(f"hypergraph on [{hypergraph.n}] used with f on [{f.n}]")
    found = require_class(hypergraph, weighting, required)
    if found is WeightingClass.PARTITION:
        return found

    if f.requires_partition:
        raise ClassificationError(f"{f.name} bounds need a fractional partition, got a {found}")
    if not prefix_nondecreasing(f, order, tolerance):
        raise MonotonicityError(
            f"a fractional {found} needs f([1]) <= ... <= f([n]) under order {order}"
        )
    logger.warning(f"Weighting is a {found} but not a partition; prefix monotonicity holds")
    return found


def _weighted_terms(
    f: SetFunction,
    hypergraph: Hypergraph,
    weighting: Weighting,
    term: Callable[[int], Value],
    label: str,
) -> Value:
    total: Value = 0
    for edge, mask, weight in zip(hypergraph.edges, hypergraph.masks, weighting):
        if weight == 0:
            continue
        value = term(mask)
        logger.debug(f"{label} term {format_subset(edge)}: {weight} x {value}")
        total += weight * value
    return total


def strong_upper_bound(
    f: SetFunction,
    hypergraph: Hypergraph,
    weighting: Weighting,
    order: GroundOrder | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Value:
    """Σ α(s) f(s | <s)."""
    order = order or GroundOrder.natural(f.n)
    _check_order(f, order)
    check_bound_weighting(f, hypergraph, weighting, WeightingClass.COVERING, order, tolerance)
    return _weighted_terms(
        f, hypergraph, weighting, lambda s: conditional_mask(f, s, order.preceding(s)), "upper"
    )


def strong_lower_bound(
    f: SetFunction,
    hypergraph: Hypergraph,
    weighting: Weighting,
    order: GroundOrder | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Value:
    """Σ β(s) f(s | s^c minus >s)."""
    order = order or GroundOrder.natural(f.n)
    _check_order(f, order)
    check_bound_weighting(f, hypergraph, weighting, WeightingClass.PACKING, order, tolerance)
    everything = full_mask(f.n)

    def term(s: int) -> Value:
        return conditional_mask(f, s, everything & ~s & ~order.following(s))

    return _weighted_terms(f, hypergraph, weighting, term, "lower")


def weak_upper_bound(
    f: SetFunction,
    hypergraph: Hypergraph,
    weighting: Weighting,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Value:
    """Σ α(s) f(s)."""
    order = GroundOrder.natural(f.n)
    check_bound_weighting(f, hypergraph, weighting, WeightingClass.COVERING, order, tolerance)
    return _weighted_terms(f, hypergraph, weighting, f.value, "weak upper")


def weak_lower_bound(
    f: SetFunction,
    hypergraph: Hypergraph,
    weighting: Weighting,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Value:
    """Σ β(s) f(s | s^c)."""
    order = GroundOrder.natural(f.n)
    check_bound_weighting(f, hypergraph, weighting, WeightingClass.PACKING, order, tolerance)
    everything = full_mask(f.n)
    return _weighted_terms(
        f, hypergraph, weighting, lambda s: conditional_mask(f, s, everything & ~s), "weak lower"
    )


@dataclasses.dataclass(frozen=True)
class BoundReport:
    lower: Value
    upper: Value
    exact: Value
    lower_weighting: Weighting
    upper_weighting: Weighting
    order: GroundOrder
    form: str

    @property
    def gap_lower(self) -> Value:
        return self.exact - self.lower

    @property
    def gap_upper(self) -> Value:
        return self.upper - self.exact

    def holds(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.gap_lower >= -tolerance and self.gap_upper >= -tolerance

    def as_dict(self) -> dict[str, Any]:
        return {
            "form": self.form,
            "order": str(self.order),
            "lower": self.lower,
            "exact": self.exact,
            "upper": self.upper,
            "gap_lower": self.gap_lower,
            "gap_upper": self.gap_upper,
            "lower_weighting": [str(value) for value in self.lower_weighting],
            "upper_weighting": [str(value) for value in self.upper_weighting],
        }
