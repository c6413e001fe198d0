"""The collection, weighting, order and target mini-languages of the command line.

Specs are "name" or "name:argument"; every family is a first-match rule set.
"""

import enum
from logging import getLogger
from typing import Any, NamedTuple

import networkx as nx

from ..counting import complete_graph, graph_from_dict, independent_set_gadget
from ..dispatch import BaseRule, BaseRuleSet
from ..exceptions import InputParseError, PreconditionError
from ..hypergraph import (
    CollectionKind,
    Hypergraph,
    Weighting,
    degree_covering,
    degree_packing,
    hypergraph_from_dict,
    standard_collection,
    weighting_from_dict,
)
from ..lp import optimal_bound_weightings
from ..schemas import load_json
from ..setfn import GroundOrder, SetFunction, conditional_mask
from ..setfn.forms import WeakForm
from ..utils import full_mask

logger = getLogger(__name__)


def split_spec(spec: str) -> tuple[str, str | None]:
    name, separator, argument = spec.strip().partition(":")
    return name, argument if separator else None


def _int_argument(spec: str, minimum: int = 1) -> int:
    name, argument = split_spec(spec)
    if argument is None:
        raise InputParseError(f"{name} needs an integer argument, as in {name}:2")
    try:
        value = int(argument)
    except ValueError as err:
        raise InputParseError(f"{spec!r}: {argument!r} is not an integer") from err
    if value < minimum:
        raise InputParseError(f"{spec!r}: argument must be at least {minimum}")
    return value


def _path_argument(spec: str) -> str:
    name, argument = split_spec(spec)
    if not argument:
        raise InputParseError(f"{name} needs a path, as in {name}:edges.json")
    return argument


class NamedSpec(BaseRule[str, Any]):
    """Matches on the name before the first colon."""

    @classmethod
    def is_matched(cls, data: str, context: Any) -> bool:
        return split_spec(data)[0] == cls.key


# ----- collections -----


class KSetsSpec(NamedSpec):
    key = CollectionKind.K_SETS.value

    @classmethod
    def apply(cls, data: str, context: int) -> Hypergraph:
        return standard_collection(CollectionKind.K_SETS, context, _int_argument(data))


class SingletonsSpec(NamedSpec):
    key = CollectionKind.SINGLETONS.value

    @classmethod
    def apply(cls, data: str, context: int) -> Hypergraph:
        return standard_collection(CollectionKind.SINGLETONS, context)


class LeaveOneOutSpec(NamedSpec):
    key = CollectionKind.ALL_MINUS_ONE.value

    @classmethod
    def apply(cls, data: str, context: int) -> Hypergraph:
        return standard_collection(CollectionKind.ALL_MINUS_ONE, context)


class ConsecutiveSpec(NamedSpec):
    key = CollectionKind.CONSECUTIVE.value

    @classmethod
    def apply(cls, data: str, context: int) -> Hypergraph:
        return standard_collection(CollectionKind.CONSECUTIVE, context, _int_argument(data))


class CollectionFileSpec(NamedSpec):
    key = "file"

    @classmethod
    def apply(cls, data: str, context: int) -> Hypergraph:
        hypergraph = hypergraph_from_dict(load_json(_path_argument(data)))
        if hypergraph.n != context:
            raise PreconditionError(f"hypergraph is on [{hypergraph.n}], expected [{context}]")
        return hypergraph


class CollectionSpecs(BaseRuleSet[str, int]):
    kind = "collection spec"
    rules = [KSetsSpec, SingletonsSpec, LeaveOneOutSpec, ConsecutiveSpec, CollectionFileSpec]


def parse_collection(spec: str, n: int) -> Hypergraph:
    hypergraph = CollectionSpecs.resolve(spec, n)
    logger.info(f"Collection {spec!r}: {hypergraph}")
    return hypergraph


# ----- weightings -----


class Side(enum.StrEnum):
    LOWER = "lower"
    UPPER = "upper"


class WeightingContext(NamedTuple):
    hypergraph: Hypergraph
    side: Side
    f: SetFunction | None = None
    order: GroundOrder | None = None
    form: str = "strong"


class DegreeSpec(NamedSpec):
    """Degree packing for lower bounds, degree covering for upper bounds."""

    key = "degree"

    @classmethod
    def apply(cls, data: str, context: WeightingContext) -> Weighting:
        if context.side is Side.LOWER:
            return degree_packing(context.hypergraph)
        return degree_covering(context.hypergraph)


class DegreeCoveringSpec(NamedSpec):
    key = "degree-covering"

    @classmethod
    def apply(cls, data: str, context: WeightingContext) -> Weighting:
        return degree_covering(context.hypergraph)


class DegreePackingSpec(NamedSpec):
    key = "degree-packing"

    @classmethod
    def apply(cls, data: str, context: WeightingContext) -> Weighting:
        return degree_packing(context.hypergraph)


class UnitSpec(NamedSpec):
    key = "unit"

    @classmethod
    def apply(cls, data: str, context: WeightingContext) -> Weighting:
        return Weighting.uniform(len(context.hypergraph))


class WeightingFileSpec(NamedSpec):
    key = "file"

    @classmethod
    def apply(cls, data: str, context: WeightingContext) -> Weighting:
        weighting = weighting_from_dict(load_json(_path_argument(data)))
        if len(weighting) != len(context.hypergraph):
            raise PreconditionError(
                f"{len(weighting)} weights for {len(context.hypergraph)} edges"
            )
        return weighting


class LpOptimalSpec(NamedSpec):
    """The fractional partition minimizing (upper) or maximizing (lower) the bound itself."""

    key = "lp-optimal"

    @classmethod
    def apply(cls, data: str, context: WeightingContext) -> Weighting:
        f, hypergraph = context.f, context.hypergraph
        if f is None:
            raise PreconditionError("lp-optimal weightings need a set function")
        order = context.order or GroundOrder.natural(f.n)
        everything = full_mask(f.n)
        if context.form == WeakForm.key:
            costs = [f.value(s) for s in hypergraph.masks]
            rewards = [conditional_mask(f, s, everything & ~s) for s in hypergraph.masks]
        else:
            costs = [conditional_mask(f, s, order.preceding(s)) for s in hypergraph.masks]
            rewards = [
                conditional_mask(f, s, everything & ~s & ~order.following(s))
                for s in hypergraph.masks
            ]
        weightings = optimal_bound_weightings(hypergraph, costs, rewards)
        chosen = weightings.lower if context.side is Side.LOWER else weightings.upper
        return chosen.weighting


class WeightingSpecs(BaseRuleSet[str, WeightingContext]):
    kind = "weighting spec"
    rules = [
        DegreeSpec,
        DegreeCoveringSpec,
        DegreePackingSpec,
        UnitSpec,
        WeightingFileSpec,
        LpOptimalSpec,
    ]


def parse_weighting(spec: str, context: WeightingContext) -> Weighting:
    weighting = WeightingSpecs.resolve(spec, context)
    logger.info(f"{context.side} weighting {spec!r}: {weighting}")
    return weighting


# ----- orders -----


def parse_order(spec: str | None, n: int) -> GroundOrder:
    """Either natural or a comma-separated permutation of 1..n."""
    if spec is None or spec.strip() == "natural":
        return GroundOrder.natural(n)
    try:
        permutation = tuple(int(part) for part in spec.split(","))
    except ValueError as err:
        raise InputParseError(f"order {spec!r} is not a comma-separated permutation") from err
    if len(permutation) != n:
        raise InputParseError(f"order {spec!r} lists {len(permutation)} indices, expected {n}")
    try:
        return GroundOrder(permutation)
    except PreconditionError as err:
        raise InputParseError(str(err)) from err


# ----- counting targets -----


class CountTarget(NamedTuple):
    name: str
    graph: nx.Graph
    independent_sets: bool = False
    colors: int | None = None


class IndependentSetsTarget(NamedSpec):
    key = "independent-sets"

    @classmethod
    def apply(cls, data: str, context: None) -> CountTarget:
        return CountTarget(cls.key, independent_set_gadget(), independent_sets=True)


class ColoringsTarget(NamedSpec):
    key = "colorings"

    @classmethod
    def apply(cls, data: str, context: None) -> CountTarget:
        r = _int_argument(data, minimum=2)
        return CountTarget(f"{cls.key}:{r}", complete_graph(r), colors=r)


class HomTarget(NamedSpec):
    key = "hom"

    @classmethod
    def apply(cls, data: str, context: None) -> CountTarget:
        return CountTarget(data, graph_from_dict(load_json(_path_argument(data))))


class CountTargets(BaseRuleSet[str, None]):
    kind = "count target"
    rules = [IndependentSetsTarget, ColoringsTarget, HomTarget]


def parse_target(spec: str) -> CountTarget:
    return CountTargets.resolve(spec, None)

