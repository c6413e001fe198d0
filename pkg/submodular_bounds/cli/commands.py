"""Subcommand handlers. Each takes the parsed arguments and settings and returns a Report."""

import argparse
import math
from collections.abc import Mapping
from logging import getLogger
from typing import Any, NamedTuple

from ..config import Settings
from ..counting import (
    coloring_bound,
    graph_from_dict,
    hom_bound,
    hom_count_exact,
    independent_set_bound,
    independent_sets_exact,
    is_regular_graph,
    regular_independent_set_cap,
)
from ..detineq import (
    classical_inequalities,
    determinant_bounds,
    gaussian_bridge_check,
    logdet_set_function,
    matrix_from_dict,
    regular_determinant_check,
)
from ..dispatch import BaseRule, BaseRuleSet
from ..entropy import (
    Units,
    conditional_entropy_counterexample,
    conditional_entropy_set_function,
    distribution_from_dict,
    entropy_power_monotonicity,
    entropy_set_function,
    han_averages,
)
from ..exceptions import InputParseError
from ..hypergraph import (
    Hypergraph,
    Weighting,
    dual_hypergraph,
    hypergraph_from_dict,
    is_regular,
    total_weight,
)
from ..lp import optimal_fractional_covering, optimal_fractional_packing
from ..relent import (
    divergence_bounds,
    divergence_set_function,
    entropy_functional_identity,
    pair_from_dict,
    regular_divergence_bound,
    tensorization_check,
    tensorization_from_dict,
)
from ..schemas import load_json
from ..setfn import (
    SetFunction,
    bound_report,
    gap_duality_check,
    gap_monotonicity_sequence,
    is_submodular,
    is_supermodular,
    regular_gap_pair,
)
from ..setfn.forms import DegreeForm
from ..utils import parse_rational
from .report import Report
from .specs import (
    Side,
    WeightingContext,
    parse_collection,
    parse_order,
    parse_target,
    parse_weighting,
)

logger = getLogger(__name__)


def _arguments(args: argparse.Namespace, *names: str) -> dict[str, Any]:
    return {name: getattr(args, name, None) for name in names}


def _units(settings: Settings) -> Units:
    return Units(settings.log_base)


def _weighting_for(
    spec: str,
    hypergraph: Hypergraph,
    side: Side,
    f: SetFunction | None = None,
    args: argparse.Namespace | None = None,
) -> Weighting:
    order = parse_order(getattr(args, "order", None), hypergraph.n)
    form = getattr(args, "form", "strong")
    return parse_weighting(spec, WeightingContext(hypergraph, side, f, order, form))


def _log_slack(bound_log2: float, exact: int) -> float:
    """log2 bound - log2 exact; a zero count never violates a bound."""
    return bound_log2 - math.log2(exact) if exact else math.inf


# ----- bounds -----


def cmd_bounds(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report.start(
        "bounds",
        settings,
        _arguments(
            args, "collection", "weighting", "lower_weighting", "upper_weighting", "order", "form"
        ),
        {"distribution": args.distribution},
    )
    distribution = distribution_from_dict(load_json(args.distribution))
    f = entropy_set_function(distribution, _units(settings))
    hypergraph = parse_collection(args.collection, f.n)
    order = parse_order(args.order, f.n)

    lower_weighting = upper_weighting = None
    if args.form != DegreeForm.key:
        lower_weighting = _weighting_for(
            args.lower_weighting or args.weighting, hypergraph, Side.LOWER, f, args
        )
        upper_weighting = _weighting_for(
            args.upper_weighting or args.weighting, hypergraph, Side.UPPER, f, args
        )
    elif args.lower_weighting or args.upper_weighting:
        logger.warning("The degree form picks its own weightings; explicit ones are ignored")

    result = bound_report(
        f, hypergraph, lower_weighting, upper_weighting, order, args.form, settings.tolerance
    )
    provenance = {"form": result.form, "order": str(result.order)}
    report.add_result("lower", result.lower, weighting=str(result.lower_weighting), **provenance)
    report.add_result("exact", result.exact)
    report.add_result("upper", result.upper, weighting=str(result.upper_weighting), **provenance)
    report.add_result("gap_lower", result.gap_lower)
    report.add_result("gap_upper", result.gap_upper)
    report.add_assertion("lower <= exact", result.gap_lower)
    report.add_assertion("exact <= upper", result.gap_upper)
    return report


# ----- lp-cover -----


def _parse_values(spec: str | None) -> list[Any] | None:
    if spec is None:
        return None
    return [parse_rational(part) for part in spec.split(",")]


def cmd_lp_cover(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report.start(
        "lp-cover", settings, _arguments(args, "costs"), {"hypergraph": args.hypergraph}
    )
    hypergraph = hypergraph_from_dict(load_json(args.hypergraph))
    costs = _parse_values(args.costs)
    covering = optimal_fractional_covering(hypergraph, costs)
    report.add_result("weighting", list(covering.weighting), program="covering")
    report.add_result("optimum", covering.optimum, program="covering")
    report.add_result("weight", total_weight(covering.weighting))

    if costs is None:
        # With unit costs the dual program is the unit packing of the transposed system
        packing = optimal_fractional_packing(dual_hypergraph(hypergraph))
        report.add_result("dual_optimum", packing.optimum, program="dual packing")
        report.add_assertion(
            "covering optimum = dual packing optimum",
            -abs(covering.optimum - packing.optimum),
            holds=covering.optimum == packing.optimum,
        )
    return report


# ----- count -----


def cmd_count(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report.start(
        "count", settings, _arguments(args, "target", "with_exact"), {"graph": args.graph}
    )
    graph = graph_from_dict(load_json(args.graph))
    target = parse_target(args.target)
    guard, allow_large = settings.hom_guard, settings.allow_large

    if target.independent_sets:
        degree_bound = independent_set_bound(graph)
        report.add_result("bound_log2", degree_bound.log2, bound="degree")
        report.add_result("bound", degree_bound.value, bound="degree")
    if target.colors:
        exact_form = coloring_bound(graph, target.colors, guard, allow_large)
    else:
        exact_form = hom_bound(graph, target.graph, guard, allow_large)
    report.add_result("hom_bound_log2", exact_form.log2, bound="homomorphism", target=target.name)
    report.add_result("hom_bound", exact_form.value, bound="homomorphism", target=target.name)

    if target.independent_sets and is_regular_graph(graph)[0]:
        cap = regular_independent_set_cap(graph)
        report.add_result("regular_cap", cap.value)
        report.add_assertion("bound <= regular cap", cap.log2 - degree_bound.log2)

    if args.with_exact:
        if target.independent_sets:
            exact = independent_sets_exact(graph, settings.independent_set_limit, allow_large)
        else:
            exact = hom_count_exact(graph, target.graph, guard, allow_large)
        report.add_result("exact", exact)
        report.add_assertion("exact <= hom bound", _log_slack(exact_form.log2, exact))
        if target.independent_sets:
            report.add_result("ratio", exact / degree_bound.value)
            report.add_assertion("exact <= bound", _log_slack(degree_bound.log2, exact))
        elif exact_form.value:
            report.add_result("ratio", exact / exact_form.value)
    return report


# ----- detineq -----


def cmd_detineq(args: argparse.Namespace, settings: Settings) -> Report:
    report = Report.start(
        "detineq", settings, _arguments(args, "collection", "weighting"), {"matrix": args.matrix}
    )
    matrix = matrix_from_dict(load_json(args.matrix))
    hypergraph = parse_collection(args.collection, matrix.n)
    weighting = _weighting_for(args.weighting, hypergraph, Side.UPPER)
    tolerance = settings.tolerance

    sandwich = determinant_bounds(matrix, hypergraph, weighting, tolerance)
    provenance = {"weighting": str(weighting)}
    report.add_result("lower", sandwich.lower, **provenance)
    report.add_result("det", sandwich.det)
    report.add_result("upper", sandwich.upper, **provenance)
    report.add_result("log_lower", sandwich.log_lower)
    report.add_result("log_det", sandwich.log_det)
    report.add_result("log_upper", sandwich.log_upper)
    report.add_assertion("lower <= det", sandwich.log_det - sandwich.log_lower)
    report.add_assertion("det <= upper", sandwich.log_upper - sandwich.log_det)

    for check in classical_inequalities(matrix):
        report.add_result(check.name, check.slack, quantity="log slack")
        report.add_assertion(check.name, check.slack)

    bridge = gaussian_bridge_check(matrix, hypergraph, weighting, tolerance)
    mismatch = max(
        abs(bridge.determinant.log_lower - bridge.log_lower_from_entropy),
        abs(bridge.determinant.log_upper - bridge.log_upper_from_entropy),
    )
    report.add_assertion("gaussian entropy bridge", -mismatch)

    if is_regular(hypergraph)[0] and len(hypergraph) > 1:
        check = regular_determinant_check(matrix, hypergraph, tolerance)
        report.add_assertion(check.name, check.slack)
    return report


# ----- check -----


class CheckRequest(NamedTuple):
    args: argparse.Namespace
    settings: Settings


def _require_input(request: CheckRequest, kind: str) -> Any:
    if not request.args.input:
        raise InputParseError(f"check {kind} needs an input file")
    return load_json(request.args.input)


def _set_function_from(data: Mapping[str, Any], units: Units) -> SetFunction:
    """Log-det for matrix inputs, entropy for distributions."""
    if isinstance(data, Mapping) and "rows" in data:
        return logdet_set_function(matrix_from_dict(data))
    return entropy_set_function(distribution_from_dict(data), units)


class BaseCheck(BaseRule[str, CheckRequest]):
    default_collection: str = "singletons"

    @classmethod
    def is_matched(cls, data: str, context: CheckRequest) -> bool:
        return data == cls.key

    @classmethod
    def start(cls, request: CheckRequest) -> Report:
        arguments = _arguments(request.args, "collection", "weighting", "order")
        arguments["kind"] = cls.key
        return Report.start("check", request.settings, arguments, {"input": request.args.input})

    @classmethod
    def collection(cls, request: CheckRequest, n: int) -> Hypergraph:
        return parse_collection(request.args.collection or cls.default_collection, n)


class SubmodularCheck(BaseCheck):
    key = "submodular"

    @classmethod
    def apply(cls, data: str, context: CheckRequest) -> Report:
        settings = context.settings
        report = cls.start(context)
        f = _set_function_from(_require_input(context, cls.key), _units(settings))
        check = is_submodular(
            f, settings.tolerance, settings.enumeration_limit, settings.allow_large
        )
        report.add_result("set_function", f.name)
        if check.witness is not None:
            report.add_result("witness", [list(check.witness.s), list(check.witness.t)])
        deficit = check.witness.deficit if check.witness else 0.0
        report.add_assertion(f"{f.name} is submodular", -deficit, holds=check.holds)
        return report


class SupermodularCheck(BaseCheck):
    key = "supermodular"
    default_collection = "leave-one-out"

    @classmethod
    def apply(cls, data: str, context: CheckRequest) -> Report:
        settings, args = context.settings, context.args
        report = cls.start(context)
        pair = pair_from_dict(_require_input(context, cls.key), _units(settings))
        d = divergence_set_function(pair)
        check = is_supermodular(
            d, settings.tolerance, settings.enumeration_limit, settings.allow_large
        )
        deficit = check.witness.deficit if check.witness else 0.0
        report.add_assertion("divergence is supermodular", -deficit, holds=check.holds)

        hypergraph = parse_collection(
            args.collection or (cls.default_collection if pair.n > 1 else "singletons"), pair.n
        )
        weighting = _weighting_for(args.weighting or "degree", hypergraph, Side.UPPER, args=args)
        sandwich = divergence_bounds(
            pair, hypergraph, weighting, parse_order(args.order, pair.n), settings.tolerance
        )
        report.add_result("lower_sum", sandwich.lower_sum, weighting=str(weighting))
        report.add_result("divergence", sandwich.divergence)
        report.add_result("upper_sum", sandwich.upper_sum, weighting=str(weighting))
        report.add_assertion("lower_sum <= divergence", sandwich.divergence - sandwich.lower_sum)
        report.add_assertion("divergence <= upper_sum", sandwich.upper_sum - sandwich.divergence)

        if is_regular(hypergraph)[0]:
            regular = regular_divergence_bound(pair, hypergraph, settings.tolerance)
            report.add_result("regular_bound", regular.bound, r=regular.r)
            report.add_assertion("regular bound <= divergence", regular.divergence - regular.bound)
        return report


class CounterexampleCheck(BaseCheck):
    """Conditional entropy under a fixed order is not submodular."""

    key = "prop3"

    @classmethod
    def apply(cls, data: str, context: CheckRequest) -> Report:
        settings = context.settings
        units = _units(settings)
        report = cls.start(context)
        example = conditional_entropy_counterexample(units)
        report.add_result("H(X4|X1,X2,X3)", example.determined)
        report.add_result("H(X4|X1,X3)", example.undetermined)
        report.add_result("pair", [list(example.s), list(example.t)])
        report.add_result("deficit", example.deficit)

        f = conditional_entropy_set_function(example.distribution, units=units)
        check = is_submodular(f, settings.tolerance)
        assert check.witness is not None, "conditional entropy should fail submodularity"
        report.add_result("first_witness", [list(check.witness.s), list(check.witness.t)])
        report.add_assertion(
            "conditional entropy fails submodularity (expected)",
            check.witness.deficit,
            holds=not check.holds,
        )
        return report


class DualityCheck(BaseCheck):
    key = "duality"

    @classmethod
    def apply(cls, data: str, context: CheckRequest) -> Report:
        settings, args = context.settings, context.args
        report = cls.start(context)
        f = _set_function_from(_require_input(context, cls.key), _units(settings))
        hypergraph = cls.collection(context, f.n)
        weighting = _weighting_for(args.weighting or "degree", hypergraph, Side.UPPER, f, args)

        duality = gap_duality_check(f, hypergraph, weighting)
        report.add_result("upper_gap_over_weight", duality.lhs, weight=duality.weight)
        report.add_result("lower_gap_over_dual_weight", duality.rhs, weight=duality.dual_weight)
        report.add_assertion("gap duality", -abs(duality.lhs - duality.rhs))

        regular, r = is_regular(hypergraph)
        if regular and len(hypergraph) > (r or 0):
            gaps = regular_gap_pair(f, hypergraph)
            report.add_result("regular_ratio", gaps.predicted_ratio, r=gaps.r)
            scaled_lower = gaps.lower_complement * (gaps.edge_count - gaps.r)
            report.add_assertion("regular gap ratio", -abs(scaled_lower - gaps.r * gaps.upper))
        return report


class MonotonicityCheck(BaseCheck):
    key = "monotonicity"

    @classmethod
    def apply(cls, data: str, context: CheckRequest) -> Report:
        settings = context.settings
        report = cls.start(context)
        raw = _require_input(context, cls.key)
        f = _set_function_from(raw, _units(settings))
        sequences = gap_monotonicity_sequence(f, settings.enumeration_limit, settings.allow_large)
        report.add_result("upper_gaps", list(sequences.upper), collection="k-sets")
        report.add_result("lower_gaps", list(sequences.lower), collection="k-sets")
        report.add_assertion(
            "gap sequences nonincreasing",
            0.0 if sequences.nonincreasing(settings.tolerance) else -math.inf,
        )
        report.add_assertion(
            "gap sequences end at zero",
            -max(abs(sequences.upper[-1]), abs(sequences.lower[-1])),
        )

        if "pmf" in raw:
            distribution = distribution_from_dict(raw)
            averages = han_averages(distribution, _units(settings))
            report.add_result("han_upper", list(averages.upper))
            report.add_result("han_lower", list(averages.lower))
            powers = entropy_power_monotonicity(distribution, tolerance=settings.tolerance)
            report.add_result("entropy_power_averages", list(powers))
        return report


class TensorizationCheck(BaseCheck):
    key = "tensorization"
    default_collection = "leave-one-out"

    @classmethod
    def apply(cls, data: str, context: CheckRequest) -> Report:
        settings = context.settings
        report = cls.start(context)
        measure, g = tensorization_from_dict(_require_input(context, cls.key))
        hypergraph = cls.collection(context, measure.n)
        guard = settings.tensorization_guard if not settings.allow_large else math.inf
        result = tensorization_check(measure, g, hypergraph, settings.tolerance, guard)
        report.add_result("ent", result.lhs)
        report.add_result("bound", result.rhs, r=result.r)
        report.add_assertion("Ent <= tensorized bound", result.rhs - result.lhs)

        identity = entropy_functional_identity(measure, g, guard)
        report.add_result("scaled_divergence", identity.scaled_divergence)
        report.add_assertion(
            "Ent = E[g] D(P_g||Q)", -abs(identity.ent - identity.scaled_divergence)
        )
        return report


class CheckKinds(BaseRuleSet[str, CheckRequest]):
    kind = "check"
    rules = [
        SubmodularCheck,
        SupermodularCheck,
        CounterexampleCheck,
        DualityCheck,
        MonotonicityCheck,
        TensorizationCheck,
    ]


def cmd_check(args: argparse.Namespace, settings: Settings) -> Report:
    return CheckKinds.resolve(args.kind, CheckRequest(args, settings))
