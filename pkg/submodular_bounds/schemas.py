"""Voluptuous schemas for every JSON input format."""

import json
from decimal import Decimal
from logging import getLogger
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    CONF_ALLOW_LARGE,
    CONF_ENUMERATION_LIMIT,
    CONF_HOM_GUARD,
    CONF_INDEPENDENT_SET_LIMIT,
    CONF_LOG_BASE,
    CONF_TENSORIZATION_GUARD,
    CONF_TOLERANCE,
    LOG_BASES,
)
from .exceptions import InputParseError
from .utils import parse_rational

logger = getLogger(__name__)


def rational(value: Any):
    try:
        return parse_rational(value)
    except InputParseError as err:
        raise vol.Invalid(str(err)) from err


def real(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float | Decimal):
        raise vol.Invalid(f"expected a number, got {value!r}")
    return float(value)


positive_int = vol.All(int, vol.Range(min=1))
non_negative_int = vol.All(int, vol.Range(min=0))
positive_real = vol.All(real, vol.Range(min=0, min_included=False))

HYPERGRAPH_SCHEMA = vol.Schema(
    {
        vol.Required("n"): positive_int,
        vol.Required("edges"): [vol.All([positive_int], vol.Length(min=1))],
    }
)

WEIGHTING_SCHEMA = vol.Schema({vol.Required("weights"): [rational]})

DISTRIBUTION_SCHEMA = vol.Schema(
    {
        vol.Required("alphabet_sizes"): vol.All([positive_int], vol.Length(min=1)),
        vol.Required("pmf"): vol.All(
            [{vol.Required("x"): [non_negative_int], vol.Required("p"): rational}],
            vol.Length(min=1),
        ),
    }
)

MARGINALS_SCHEMA = vol.All([vol.All([rational], vol.Length(min=1))], vol.Length(min=1))

PAIR_SCHEMA = vol.Schema(
    {
        vol.Required("p"): DISTRIBUTION_SCHEMA,
        vol.Required("q_marginals"): MARGINALS_SCHEMA,
    }
)

MATRIX_SCHEMA = vol.Schema(
    {
        vol.Required("n"): positive_int,
        vol.Required("rows"): [[real]],
    }
)

GRAPH_SCHEMA = vol.Schema(
    {
        vol.Required("n"): positive_int,
        vol.Required("edges"): [vol.ExactSequence([positive_int, positive_int])],
        vol.Optional("loops", default=list): [positive_int],
    }
)

TENSORIZATION_SCHEMA = vol.Schema(
    {
        vol.Required("q_marginals"): MARGINALS_SCHEMA,
        vol.Required("g"): vol.All(
            [{vol.Required("x"): [non_negative_int], vol.Required("value"): real}],
            vol.Length(min=1),
        ),
    }
)

SETTINGS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_TOLERANCE): vol.All(real, vol.Range(min=0)),
        vol.Optional(CONF_LOG_BASE): vol.All(vol.Coerce(str), vol.In(LOG_BASES)),
        vol.Optional(CONF_ENUMERATION_LIMIT): positive_int,
        vol.Optional(CONF_HOM_GUARD): positive_int,
        vol.Optional(CONF_INDEPENDENT_SET_LIMIT): positive_int,
        vol.Optional(CONF_TENSORIZATION_GUARD): positive_int,
        vol.Optional(CONF_ALLOW_LARGE): bool,
    }
)


def validate(schema: vol.Schema | vol.All, data: Any, what: str) -> Any:
    try:
        return schema(data)
    except vol.Invalid as err:
        raise InputParseError(f"invalid {what}: {err}") from err


def load_json(path: str | Path) -> Any:
    """Read a JSON document, keeping decimal literals exact."""
    logger.debug(f"Loading {path}")
    try:
        with open(path, encoding="utf-8") as file:
            return json.load(file, parse_float=Decimal)
    except OSError as err:
        raise InputParseError(f"cannot read {path}: {err.strerror}") from err
    except UnicodeDecodeError as err:
        raise InputParseError(f"{path} is not UTF-8: {err}") from err
    except json.JSONDecodeError as err:
        raise InputParseError(f"{path} is not valid JSON: {err}") from err
