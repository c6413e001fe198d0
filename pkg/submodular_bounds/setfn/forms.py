from typing import ClassVar, NamedTuple

from ..const import DEFAULT_TOLERANCE
from ..dispatch import BaseRule, BaseRuleSet
from ..exceptions import PreconditionError
from ..hypergraph import Hypergraph, Weighting, degree_covering, degree_packing
from .base import GroundOrder, SetFunction
from .bounds import (
    BoundReport,
    strong_lower_bound,
    strong_upper_bound,
    weak_lower_bound,
    weak_upper_bound,
)


class BoundRequest(NamedTuple):
    f: SetFunction
    hypergraph: Hypergraph
    lower_weighting: Weighting | None
    upper_weighting: Weighting | None
    order: GroundOrder
    tolerance: float = DEFAULT_TOLERANCE


class BaseBoundForm(BaseRule[str, BoundRequest]):
    uses_order: ClassVar[bool] = True

    @classmethod
    def is_matched(cls, data: str, context: BoundRequest) -> bool:
        return data == cls.key

    @classmethod
    def weightings(cls, request: BoundRequest) -> tuple[Weighting, Weighting]:
        if request.lower_weighting is None or request.upper_weighting is None:
            raise PreconditionError(f"the {cls.key} form needs both a lower and an upper weighting")
        return request.lower_weighting, request.upper_weighting

    @classmethod
    def report(cls, request: BoundRequest, lower, upper, weightings) -> BoundReport:
        return BoundReport(
            lower=lower,
            upper=upper,
            exact=request.f.total,
            lower_weighting=weightings[0],
            upper_weighting=weightings[1],
            order=request.order if cls.uses_order else GroundOrder.natural(request.f.n),
            form=cls.key,
        )


class WeakForm(BaseBoundForm):
    key = "weak"
    uses_order = False

    @classmethod
    def apply(cls, data: str, context: BoundRequest) -> BoundReport:
        lower_w, upper_w = cls.weightings(context)
        f, hypergraph, tolerance = context.f, context.hypergraph, context.tolerance
        lower = weak_lower_bound(f, hypergraph, lower_w, tolerance)
        upper = weak_upper_bound(f, hypergraph, upper_w, tolerance)
        return cls.report(context, lower, upper, (lower_w, upper_w))


class StrongForm(BaseBoundForm):
    key = "strong"

    @classmethod
    def apply(cls, data: str, context: BoundRequest) -> BoundReport:
        lower_w, upper_w = cls.weightings(context)
        f, hypergraph, order = context.f, context.hypergraph, context.order
        lower = strong_lower_bound(f, hypergraph, lower_w, order, context.tolerance)
        upper = strong_upper_bound(f, hypergraph, upper_w, order, context.tolerance)
        return cls.report(context, lower, upper, (lower_w, upper_w))


class DegreeForm(StrongForm):
    """Strong bounds with the degree packing below and the degree covering above."""

    key = "degree"

    @classmethod
    def weightings(cls, request: BoundRequest) -> tuple[Weighting, Weighting]:
        return degree_packing(request.hypergraph), degree_covering(request.hypergraph)


class BoundForms(BaseRuleSet[str, BoundRequest]):
    kind = "bound form"
    rules = [WeakForm, StrongForm, DegreeForm]


def bound_report(
    f: SetFunction,
    hypergraph: Hypergraph,
    lower_weighting: Weighting | None = None,
    upper_weighting: Weighting | None = None,
    order: GroundOrder | None = None,
    form: str = StrongForm.key,
    tolerance: float = DEFAULT_TOLERANCE,
) -> BoundReport:
    order = order or GroundOrder.natural(f.n)
    request = BoundRequest(f, hypergraph, lower_weighting, upper_weighting, order, tolerance)
    return BoundForms.resolve(form, request)


def degree_form_bounds(
    f: SetFunction,
    hypergraph: Hypergraph,
    order: GroundOrder | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> BoundReport:
    """Strong bounds with 1/r_plus(s) weights below and 1/r_minus(s) above."""
    return bound_report(f, hypergraph, order=order, form=DegreeForm.key, tolerance=tolerance)
