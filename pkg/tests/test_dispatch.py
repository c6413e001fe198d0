import pytest

from submodular_bounds.dispatch import BaseRule, BaseRuleSet
from submodular_bounds.exceptions import InputParseError

# Global counters to verify which rules are evaluated
CALL_COUNTER = {"Exact": 0, "Prefixed": 0, "Fallback": 0}


# ----- Test fixtures: simple rules -----
class Exact(BaseRule[str, dict]):
    key = "exact"

    @classmethod
    def is_matched(cls, data: str, context: dict) -> bool:
        CALL_COUNTER["Exact"] += 1
        return data == cls.key

    @classmethod
    def apply(cls, data: str, context: dict) -> str:
        return "exact"


class Prefixed(BaseRule[str, dict]):
    key = "ex"

    @classmethod
    def is_matched(cls, data: str, context: dict) -> bool:
        CALL_COUNTER["Prefixed"] += 1
        return data.startswith(cls.key)

    @classmethod
    def apply(cls, data: str, context: dict) -> str:
        return f"prefixed:{data[len(cls.key):]}"


class Fallback(BaseRule[str, dict]):
    key = "fallback"

    @classmethod
    def is_matched(cls, data: str, context: dict) -> bool:
        CALL_COUNTER["Fallback"] += 1
        return bool(context.get("fallback"))

    @classmethod
    def apply(cls, data: str, context: dict) -> str:
        return context["fallback"]


class Rules(BaseRuleSet[str, dict]):
    kind = "test rule"
    # Order matters: Exact must come before Prefixed
    rules = [Exact, Prefixed, Fallback]


@pytest.fixture(autouse=True)
def reset_counters():
    for key in CALL_COUNTER:
        CALL_COUNTER[key] = 0


# ----- Tests -----
def test_first_match_wins():
    assert Rules.find("exact", {}) is Exact
    assert Rules.resolve("exact", {}) == "exact"
    assert CALL_COUNTER == {"Exact": 1, "Prefixed": 0, "Fallback": 0}


def test_later_rules_are_tried_in_order():
    assert Rules.resolve("extra", {}) == "prefixed:tra"
    assert CALL_COUNTER == {"Exact": 1, "Prefixed": 1, "Fallback": 0}


def test_context_used_by_rule():
    assert Rules.resolve("other", {"fallback": "from context"}) == "from context"
    assert all(count == 1 for count in CALL_COUNTER.values())


def test_no_match_raises_parse_error():
    with pytest.raises(InputParseError, match="unrecognised test rule 'other'"):
        Rules.find("other", {})


def test_get_all_keys_keeps_rule_order():
    assert Rules.get_all_keys() == ["exact", "ex", "fallback"]


def test_empty_key_raises():
    with pytest.raises(AssertionError):

        class Bad(BaseRule[str, dict]):
            key = ""

            @classmethod
            def is_matched(cls, data: str, context: dict) -> bool:  # pragma: no cover
                return True

            @classmethod
            def apply(cls, data: str, context: dict) -> None:  # pragma: no cover
                return None


def test_rules_are_static_classes():
    with pytest.raises(TypeError):
        Exact()

    with pytest.raises(TypeError):

        class WithInstanceMethod(BaseRule[str, dict]):
            key = "instance"

            def is_matched(self, data: str, context: dict) -> bool:  # pragma: no cover
                return True

            @classmethod
            def apply(cls, data: str, context: dict) -> None:  # pragma: no cover
                return None


def test_instance_methods_cannot_be_attached_later():
    with pytest.raises(TypeError, match="only hold classmethods"):
        Exact.describe = lambda self: self.key
    assert not hasattr(Exact, "describe")

    Exact.tag = "exact rule"
    assert Exact.tag == "exact rule"
    del Exact.tag
