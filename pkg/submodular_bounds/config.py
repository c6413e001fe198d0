import dataclasses
from collections.abc import Mapping
from logging import getLogger
from typing import Any

from .const import (
    CONF_ALLOW_LARGE,
    CONF_ENUMERATION_LIMIT,
    CONF_HOM_GUARD,
    CONF_INDEPENDENT_SET_LIMIT,
    CONF_LOG_BASE,
    CONF_TENSORIZATION_GUARD,
    CONF_TOLERANCE,
    DEFAULT_ALLOW_LARGE,
    DEFAULT_ENUMERATION_LIMIT,
    DEFAULT_HOM_GUARD,
    DEFAULT_INDEPENDENT_SET_LIMIT,
    DEFAULT_LOG_BASE,
    DEFAULT_TENSORIZATION_GUARD,
    DEFAULT_TOLERANCE,
)
from .schemas import SETTINGS_SCHEMA, validate

logger = getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Settings:
    tolerance: float = DEFAULT_TOLERANCE
    log_base: str = DEFAULT_LOG_BASE
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
    hom_guard: int = DEFAULT_HOM_GUARD
    independent_set_limit: int = DEFAULT_INDEPENDENT_SET_LIMIT
    tensorization_guard: int = DEFAULT_TENSORIZATION_GUARD
    allow_large: bool = DEFAULT_ALLOW_LARGE


_DEFAULTS: dict[str, Any] = {
    CONF_TOLERANCE: DEFAULT_TOLERANCE,
    CONF_LOG_BASE: DEFAULT_LOG_BASE,
    CONF_ENUMERATION_LIMIT: DEFAULT_ENUMERATION_LIMIT,
    CONF_HOM_GUARD: DEFAULT_HOM_GUARD,
    CONF_INDEPENDENT_SET_LIMIT: DEFAULT_INDEPENDENT_SET_LIMIT,
    CONF_TENSORIZATION_GUARD: DEFAULT_TENSORIZATION_GUARD,
    CONF_ALLOW_LARGE: DEFAULT_ALLOW_LARGE,
}


def resolve_settings(
    options: Mapping[str, Any] | None = None, data: Mapping[str, Any] | None = None
) -> Settings:
    """Merge command line options over config file data over defaults.

    Options that are None count as unset.
    """
    options = {key: value for key, value in (options or {}).items() if value is not None}
    data = validate(SETTINGS_SCHEMA, dict(data or {}), "settings")
    options = validate(SETTINGS_SCHEMA, options, "settings")

    merged = {key: options.get(key, data.get(key, default)) for key, default in _DEFAULTS.items()}
    logger.debug(f"Resolved settings: {merged}")
    return Settings(**merged)
