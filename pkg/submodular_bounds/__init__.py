"""Fractional covering and packing bounds for submodular set functions."""

from .config import Settings, resolve_settings
from .exceptions import (
    InequalityViolation,
    InputParseError,
    PreconditionError,
    ResourceGuardError,
    SubmodularBoundsError,
)
from .hypergraph import Hypergraph, Weighting, WeightingClass
from .setfn import GroundOrder, SetFunction

__all__ = [
    "GroundOrder",
    "Hypergraph",
    "InequalityViolation",
    "InputParseError",
    "PreconditionError",
    "ResourceGuardError",
    "Settings",
    "SetFunction",
    "SubmodularBoundsError",
    "Weighting",
    "WeightingClass",
    "resolve_settings",
]
