from collections.abc import Iterable, Iterator
from decimal import Decimal
from fractions import Fraction
from typing import Any

from .exceptions import InputParseError, PreconditionError

# ----- subsets of [n] as bitmasks: bit i-1 stands for index i -----


def to_mask(subset: Iterable[int], n: int) -> int:
    mask = 0
    for i in subset:
        if not 1 <= i <= n:
            raise PreconditionError(f"index {i} outside ground set [1..{n}]")
        mask |= 1 << (i - 1)
    return mask


def from_mask(mask: int) -> tuple[int, ...]:
    indices = []
    i = 1
    while mask:
        if mask & 1:
            indices.append(i)
        mask >>= 1
        i += 1
    return tuple(indices)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def iter_masks(n: int) -> Iterator[int]:
    return iter(range(1 << n))


def format_subset(subset: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in subset) + "}"


def parse_rational(value: Any, allow_float: bool = False) -> Fraction:
    """Parse "p/q" strings, integers and decimals into an exact Fraction.

    JSON inputs are decoded with Decimal floats, so "0.25" in a file stays exact.
    """
    if isinstance(value, bool):
        raise InputParseError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction | int | Decimal):
        return Fraction(value)
    if isinstance(value, float):
        if not allow_float:
            raise InputParseError(
                f"binary float {value!r} is not exact; quote it as a decimal or p/q string"
            )
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise InputParseError(f"not a rational number: {value!r}") from err
    raise InputParseError(f"not a rational number: {value!r}")
