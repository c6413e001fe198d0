from decimal import Decimal

import pytest

from submodular_bounds.config import Settings, resolve_settings
from submodular_bounds.const import (
    CONF_ALLOW_LARGE,
    CONF_HOM_GUARD,
    CONF_LOG_BASE,
    CONF_TOLERANCE,
    DEFAULT_HOM_GUARD,
    DEFAULT_TOLERANCE,
)
from submodular_bounds.exceptions import InputParseError


# ----- resolution order -----
def test_defaults(settings):
    assert resolve_settings() == settings
    assert settings.tolerance == DEFAULT_TOLERANCE
    assert settings.log_base == "e"
    assert not settings.allow_large


def test_options_override_data():
    resolved = resolve_settings(
        {CONF_TOLERANCE: 1e-6, CONF_LOG_BASE: None},
        {CONF_TOLERANCE: Decimal("1e-3"), CONF_LOG_BASE: "2", CONF_HOM_GUARD: 50},
    )
    assert resolved == Settings(tolerance=1e-6, log_base="2", hom_guard=50)


def test_none_options_are_unset():
    resolved = resolve_settings({CONF_ALLOW_LARGE: None, CONF_HOM_GUARD: None})
    assert resolved.hom_guard == DEFAULT_HOM_GUARD
    assert resolved.allow_large is False


def test_numeric_log_base_is_coerced():
    assert resolve_settings(data={CONF_LOG_BASE: 2}).log_base == "2"


# ----- schema errors -----
@pytest.mark.parametrize(
    "data",
    [
        {CONF_TOLERANCE: -1},
        {CONF_TOLERANCE: "small"},
        {CONF_LOG_BASE: "10"},
        {CONF_HOM_GUARD: 0},
        {CONF_ALLOW_LARGE: "yes"},
        {"unknown": 1},
    ],
)
def test_invalid_settings_raise(data):
    with pytest.raises(InputParseError, match="invalid settings"):
        resolve_settings(data=data)
