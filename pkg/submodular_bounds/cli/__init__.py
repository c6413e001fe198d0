"""Command line front end: submodular-bounds {bounds,lp-cover,count,detineq,check}."""

import argparse
import logging
import sys
from collections.abc import Sequence
from logging import getLogger

from ..config import Settings, resolve_settings
from ..const import (
    CONF_ALLOW_LARGE,
    CONF_LOG_BASE,
    CONF_TOLERANCE,
    EXIT_INEQUALITY_VIOLATION,
    EXIT_OK,
    LOG_BASES,
)
from ..exceptions import SubmodularBoundsError
from ..schemas import load_json
from ..setfn import BoundForms
from .commands import CheckKinds, cmd_bounds, cmd_check, cmd_count, cmd_detineq, cmd_lp_cover
from .report import Report
from .specs import CollectionSpecs, CountTargets, WeightingSpecs

logger = getLogger(__name__)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _keys(rule_set) -> str:
    return ", ".join(rule_set.get_all_keys())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="submodular-bounds",
        description="Fractional bounds for submodular set functions and their applications.",
    )
    parser.add_argument("--log-base", choices=LOG_BASES, help="entropy units (default e)")
    parser.add_argument("--tolerance", type=float, help="slack allowed in float comparisons")
    parser.add_argument("--config", help="JSON settings file")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument(
        "--allow-large", action="store_true", help="lift the enumeration and oracle guards"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    bounds = subparsers.add_parser("bounds", help="bound H(X_[n]) of a distribution file")
    bounds.add_argument("distribution")
    bounds.add_argument(
        "--collection", default="singletons", help=f"one of {_keys(CollectionSpecs)}"
    )
    bounds.add_argument("--weighting", default="degree", help=f"one of {_keys(WeightingSpecs)}")
    bounds.add_argument("--lower-weighting")
    bounds.add_argument("--upper-weighting")
    bounds.add_argument("--order", default="natural")
    bounds.add_argument("--form", choices=BoundForms.get_all_keys(), default="strong")
    bounds.set_defaults(handler=cmd_bounds)

    lp_cover = subparsers.add_parser("lp-cover", help="optimal fractional covering")
    lp_cover.add_argument("hypergraph")
    lp_cover.add_argument("--costs", help="comma-separated edge costs, default all 1")
    lp_cover.set_defaults(handler=cmd_lp_cover)

    count = subparsers.add_parser("count", help="homomorphism and independent set bounds")
    count.add_argument("graph")
    count.add_argument(
        "--target", default="independent-sets", help=f"one of {_keys(CountTargets)}"
    )
    count.add_argument("--with-exact", action="store_true")
    count.set_defaults(handler=cmd_count)

    detineq = subparsers.add_parser("detineq", help="determinantal inequalities")
    detineq.add_argument("matrix")
    detineq.add_argument("--collection", default="singletons")
    detineq.add_argument("--weighting", default="degree")
    detineq.set_defaults(handler=cmd_detineq)

    check = subparsers.add_parser("check", help="run one verification")
    check.add_argument("kind", choices=CheckKinds.get_all_keys())
    check.add_argument("input", nargs="?")
    check.add_argument("--collection")
    check.add_argument("--weighting")
    check.add_argument("--order", default="natural")
    check.set_defaults(handler=cmd_check)
    return parser


def settings_from_args(args: argparse.Namespace) -> Settings:
    options = {
        CONF_TOLERANCE: args.tolerance,
        CONF_LOG_BASE: args.log_base,
        CONF_ALLOW_LARGE: True if args.allow_large else None,
    }
    data = load_json(args.config) if args.config else {}
    return resolve_settings(options, data)


def run(args: argparse.Namespace) -> Report:
    settings = settings_from_args(args)
    logger.info(f"Running {args.command} with {settings}")
    return args.handler(args, settings)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        report = run(args)
    except SubmodularBoundsError as err:
        logger.error(f"{args.command} failed: {err}")
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code

    print(report.to_json() if args.json else report.to_table())
    if not report.passed:
        logger.error(f"Assertions failed: {', '.join(report.failed)}")
        return EXIT_INEQUALITY_VIOLATION
    return EXIT_OK
