import abc
import dataclasses
import itertools
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from logging import getLogger
from typing import Any, NamedTuple

from ..const import DEFAULT_ENUMERATION_LIMIT, DEFAULT_TOLERANCE
from ..exceptions import OverlapError, PreconditionError, ResourceGuardError
from ..utils import from_mask, full_mask, iter_masks, parse_rational, to_mask

logger = getLogger(__name__)

Value = float | Fraction


def check_enumerable(
    n: int, limit: int = DEFAULT_ENUMERATION_LIMIT, allow_large: bool = False
) -> None:
    if n > limit and not allow_large:
        raise ResourceGuardError(
            f"exhaustive enumeration over 2^{n} subsets exceeds the limit n <= {limit}"
        )


class SetFunction(abc.ABC):
    """A map from subsets of [n] to values with f(∅) = 0.

    Subsets are passed as bitmasks to value() and as index iterables to __call__.
    Evaluations are memoized, so backends must be pure.
    """

    # Continuous backends only admit fractional partitions in the bound machinery
    requires_partition: bool = False
    exact: bool = False

    def __init__(self, n: int, name: str = ""):
        if n < 1:
            raise PreconditionError(f"ground set size must be positive, got {n}")
        self.n = n
        self.name = name or type(self).__name__
        self._cache: dict[int, Value] = {}

    @abc.abstractmethod
    def _evaluate(self, mask: int) -> Value:
        """Backend value for a nonempty subset"""

    def value(self, mask: int) -> Value:
        if mask == 0:
            return Fraction(0) if self.exact else 0.0
        if mask < 0 or mask > full_mask(self.n):
            raise PreconditionError(f"subset {from_mask(mask)} outside [1..{self.n}]")
        if (cached := self._cache.get(mask)) is not None:
            return cached
        self._cache[mask] = result = self._evaluate(mask)
        return result

    def __call__(self, subset: Iterable[int]) -> Value:
        return self.value(to_mask(subset, self.n))

    @property
    def total(self) -> Value:
        return self.value(full_mask(self.n))

    def __repr__(self) -> str:
        return f"{self.name}(n={self.n})"


class CallableSetFunction(SetFunction):
    def __init__(self, n: int, func: Callable[[int], Value], name: str = "", exact: bool = False):
        super().__init__(n, name)
        self._func = func
        self.exact = exact

    def _evaluate(self, mask: int) -> Value:
        return self._func(mask)


class ModularSetFunction(SetFunction):
    exact = True

    def __init__(self, weights: Sequence[Any]):
        super().__init__(len(weights), "modular")
        self.weights = tuple(parse_rational(a, allow_float=True) for a in weights)

    def _evaluate(self, mask: int) -> Value:
        return sum((self.weights[i - 1] for i in from_mask(mask)), Fraction(0))


class TableSetFunction(SetFunction):
    """Explicit values for every nonempty subset."""

    exact = True

    def __init__(self, n: int, values: Mapping[frozenset[int] | tuple[int, ...], Any]):
        super().__init__(n, "table")
        self._table = {
            to_mask(subset, n): parse_rational(v, allow_float=True) for subset, v in values.items()
        }
        if missing := [m for m in range(1, full_mask(n) + 1) if m not in self._table]:
            raise PreconditionError(f"no value for subset {from_mask(missing[0])}")

    def _evaluate(self, mask: int) -> Value:
        return self._table[mask]


class NegatedSetFunction(SetFunction):
    def __init__(self, inner: SetFunction):
        super().__init__(inner.n, f"-{inner.name}")
        self.inner = inner
        self.exact = inner.exact
        self.requires_partition = inner.requires_partition

    def _evaluate(self, mask: int) -> Value:
        return -self.inner.value(mask)


def modular_set_function(weights: Sequence[Any]) -> ModularSetFunction:
    return ModularSetFunction(weights)


def table_set_function(
    n: int, values: Mapping[frozenset[int] | tuple[int, ...], Any]
) -> TableSetFunction:
    return TableSetFunction(n, values)


@dataclasses.dataclass(frozen=True)
class GroundOrder:
    """A total order on [n], given as the permutation listing indices first to last."""

    permutation: tuple[int, ...]

    def __post_init__(self):
        permutation = tuple(self.permutation)
        if sorted(permutation) != list(range(1, len(permutation) + 1)):
            raise PreconditionError(f"not a permutation of [1..{len(permutation)}]: {permutation}")
        object.__setattr__(self, "permutation", permutation)

    @classmethod
    def natural(cls, n: int) -> "GroundOrder":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def all_orders(cls, n: int) -> Iterator["GroundOrder"]:
        return (cls(p) for p in itertools.permutations(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.permutation)

    @property
    def is_natural(self) -> bool:
        return self.permutation == tuple(range(1, self.n + 1))

    def position(self, i: int) -> int:
        return self.permutation.index(i)

    def preceding(self, mask: int) -> int:
        """Mask of <s: indices ordered before every element of s."""
        if not mask:
            return 0
        first = min(self.position(i) for i in from_mask(mask))
        return to_mask(self.permutation[:first], self.n)

    def following(self, mask: int) -> int:
        """Mask of >s: indices ordered after every element of s."""
        if not mask:
            return 0
        last = max(self.position(i) for i in from_mask(mask))
        return to_mask(self.permutation[last + 1 :], self.n)

    def prefixes(self) -> Iterator[int]:
        """Masks of the first j indices for j = 1..n."""
        mask = 0
        for i in self.permutation:
            mask |= 1 << (i - 1)
            yield mask

    def __str__(self) -> str:
        return "natural" if self.is_natural else ",".join(str(i) for i in self.permutation)


def _check_order(f: SetFunction, order: GroundOrder) -> None:
    if order.n != f.n:
        raise PreconditionError(f"order on [{order.n}] used with a set function on [{f.n}]")


def conditional_mask(f: SetFunction, s: int, t: int) -> Value:
    if s & t:
        raise OverlapError(f"conditioning on {from_mask(t)} overlaps {from_mask(s)}")
    return f.value(s | t) - f.value(t)


def conditional(f: SetFunction, s: Iterable[int], t: Iterable[int] = ()) -> Value:
    """f(s | t) = f(s ∪ t) - f(t) for disjoint s and t."""
    return conditional_mask(f, to_mask(s, f.n), to_mask(t, f.n))


def chain_rule_sum(f: SetFunction, order: GroundOrder | None = None) -> Value:
    order = order or GroundOrder.natural(f.n)
    _check_order(f, order)
    total: Value = 0
    seen = 0
    for i in order.permutation:
        bit = 1 << (i - 1)
        total += conditional_mask(f, bit, seen)
        seen |= bit
    return total


class Violation(NamedTuple):
    s: tuple[int, ...]
    t: tuple[int, ...]
    deficit: Value


class ModularityCheck(NamedTuple):
    holds: bool
    witness: Violation | None = None


def iter_violations(
    f: SetFunction,
    tolerance: float = DEFAULT_TOLERANCE,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    allow_large: bool = False,
) -> Iterator[Violation]:
    """Yield pairs with f(s) + f(t) < f(s ∪ t) + f(s ∩ t) beyond tolerance.

    Uses the equivalent local test over s = base+i, t = base+j for every base
    and i < j outside it, in increasing base mask order.
    """
    check_enumerable(f.n, limit, allow_large)
    for base in iter_masks(f.n):
        outside = [i for i in range(1, f.n + 1) if not base >> (i - 1) & 1]
        for i, j in itertools.combinations(outside, 2):
            s, t = base | 1 << (i - 1), base | 1 << (j - 1)
            deficit = f.value(s | t) + f.value(base) - f.value(s) - f.value(t)
            if deficit > tolerance:
                yield Violation(from_mask(s), from_mask(t), deficit)


def is_submodular(
    f: SetFunction,
    tolerance: float = DEFAULT_TOLERANCE,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    allow_large: bool = False,
) -> ModularityCheck:
    witness = next(iter_violations(f, tolerance, limit, allow_large), None)
    if witness is not None:
        logger.debug(f"{f!r} is not submodular: {witness}")
    return ModularityCheck(witness is None, witness)


def is_supermodular(
    f: SetFunction,
    tolerance: float = DEFAULT_TOLERANCE,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    allow_large: bool = False,
) -> ModularityCheck:
    return is_submodular(NegatedSetFunction(f), tolerance, limit, allow_large)


def submodularity_deficit(f: SetFunction, s: Iterable[int], t: Iterable[int]) -> Value:
    """f(s ∪ t) + f(s ∩ t) - f(s) - f(t); positive means the pair violates submodularity."""
    a, b = to_mask(s, f.n), to_mask(t, f.n)
    return f.value(a | b) + f.value(a & b) - f.value(a) - f.value(b)


def is_nondecreasing(
    f: SetFunction,
    tolerance: float = DEFAULT_TOLERANCE,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    allow_large: bool = False,
) -> bool:
    check_enumerable(f.n, limit, allow_large)
    for mask in iter_masks(f.n):
        for i in range(f.n):
            if not mask >> i & 1 and f.value(mask | 1 << i) < f.value(mask) - tolerance:
                return False
    return True


def prefix_nondecreasing(
    f: SetFunction, order: GroundOrder | None = None, tolerance: float = DEFAULT_TOLERANCE
) -> bool:
    """f([1]) <= f([2]) <= ... <= f([n]) along the prefixes of the order."""
    order = order or GroundOrder.natural(f.n)
    _check_order(f, order)
    previous: Value = 0
    for prefix in order.prefixes():
        current = f.value(prefix)
        if current < previous - tolerance:
            return False
        previous = current
    return True
