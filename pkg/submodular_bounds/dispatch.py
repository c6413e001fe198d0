import abc
import inspect
from abc import abstractmethod
from typing import Any, ClassVar, Generic, NoReturn, TypeVar

from .exceptions import InputParseError

DataType = TypeVar("DataType")
ContextType = TypeVar("ContextType")

# Hooks Python binds to the class itself, including generated annotation functions
_CLASS_LEVEL_HOOKS = frozenset(
    {
        "__init_subclass__",
        "__class_getitem__",
        "__subclasshook__",
        "__annotate__",
        "__annotate_func__",
    }
)


def _reject_instance_method(owner: str, name: str, value: Any) -> None:
    if inspect.isfunction(value) and name not in _CLASS_LEVEL_HOOKS:
        raise TypeError(f"{owner}.{name}: rules only hold classmethods and staticmethods")


class RuleMeta(abc.ABCMeta):
    """Rules are looked up, never instantiated, so every method is class-level."""

    def __new__(mcls, name: str, bases: tuple[type, ...], namespace: dict[str, Any], **kwargs):
        for attr, value in namespace.items():
            _reject_instance_method(name, attr, value)
        return super().__new__(mcls, name, bases, namespace, **kwargs)

    def __call__(cls, *args: Any, **kwargs: Any) -> NoReturn:
        raise TypeError(f"{cls.__name__} is a rule and cannot be instantiated")

    def __setattr__(cls, name: str, value: Any) -> None:
        _reject_instance_method(cls.__name__, name, value)
        super().__setattr__(name, value)


class BaseRule(Generic[DataType, ContextType], abc.ABC, metaclass=RuleMeta):
    key: ClassVar[str] = NotImplemented

    @classmethod
    @abstractmethod
    def is_matched(cls, data: DataType, context: ContextType) -> bool:
        """Return True if this rule handles the data"""

    @classmethod
    @abstractmethod
    def apply(cls, data: DataType, context: ContextType) -> Any:
        """Produce the rule's result"""

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.key is not NotImplemented:
            assert isinstance(cls.key, str) and cls.key, f"Rule key must be non-empty {cls}"


class BaseRuleSet(Generic[DataType, ContextType]):
    # It's BaseRule[DataType, ContextType] by meaning, but mypy doesn't like it
    rules: ClassVar[list[type[BaseRule]]]
    # Warning: rules are order-sensitive, the first match is used
    kind: ClassVar[str] = "spec"

    @classmethod
    def get_all_keys(cls) -> list[str]:
        return [rule.key for rule in cls.rules]

    @classmethod
    def find(cls, data: DataType, context: ContextType) -> type[BaseRule]:
        for rule in cls.rules:
            if rule.is_matched(data, context):
                return rule
        raise InputParseError(
            f"unrecognised {cls.kind} {data!r}; expected one of {', '.join(cls.get_all_keys())}"
        )

    @classmethod
    def resolve(cls, data: DataType, context: ContextType) -> Any:
        return cls.find(data, context).apply(data, context)
