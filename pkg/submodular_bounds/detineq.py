"""Determinantal inequalities from the submodularity of log|K(s)|.

All products of principal minors are formed in the log domain.
"""

import dataclasses
import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from logging import getLogger
from math import comb
from typing import Any, NamedTuple

import numpy as np

from .const import DEFAULT_PD_EPSILON, DEFAULT_TOLERANCE, PD_PIVOT_RATIO, SYMMETRY_TOLERANCE
from .exceptions import (
    InequalityViolation,
    InputParseError,
    NotPositiveDefiniteError,
    PreconditionError,
)
from .hypergraph import (
    Hypergraph,
    Weighting,
    WeightingClass,
    require_class,
    require_proper_edges,
    require_regular,
)
from .schemas import MATRIX_SCHEMA, validate
from .setfn import SetFunction, weak_lower_bound, weak_upper_bound
from .utils import from_mask, full_mask, to_mask

logger = getLogger(__name__)

LOG_TWO_PI_E = math.log(2 * math.pi * math.e)


@dataclasses.dataclass(frozen=True, eq=False)
class PosDefMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or not entries.size:
            raise PreconditionError(f"matrix must be square and nonempty, not {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise PreconditionError("matrix has non-finite entries")
        scale = float(np.max(np.abs(entries)))
        if np.max(np.abs(entries - entries.T)) > SYMMETRY_TOLERANCE * scale:
            raise NotPositiveDefiniteError("matrix is not symmetric")

        try:
            factor = np.linalg.cholesky(entries)
        except np.linalg.LinAlgError as err:
            raise NotPositiveDefiniteError("matrix is not positive definite") from err
        pivots = np.diag(factor) ** 2
        if np.min(pivots) < PD_PIVOT_RATIO * float(np.max(np.diag(entries))):
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite: pivot {np.min(pivots):.3e} is too small"
            )
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def submatrix(self, mask: int) -> np.ndarray:
        indices = [i - 1 for i in from_mask(mask)]
        return self.entries[np.ix_(indices, indices)]

    def log_minor(self, mask: int) -> float:
        if not mask:
            return 0.0
        factor = np.linalg.cholesky(self.submatrix(mask))
        return 2.0 * float(np.sum(np.log(np.diag(factor))))


def log_principal_minor(matrix: PosDefMatrix, subset: Iterable[int]) -> float:
    return matrix.log_minor(to_mask(subset, matrix.n))


def principal_minor(matrix: PosDefMatrix, subset: Iterable[int]) -> float:
    """|K(s)|, with |K(∅)| = 1."""
    return math.exp(log_principal_minor(matrix, subset))


class LogDetSetFunction(SetFunction):
    def __init__(self, matrix: PosDefMatrix):
        super().__init__(matrix.n, "log-det")
        self.matrix = matrix

    def _evaluate(self, mask: int) -> float:
        return self.matrix.log_minor(mask)


class GaussianEntropySetFunction(SetFunction):
    """Differential entropy of the Gaussian marginals N(0, K(s)) in nats."""

    requires_partition = True

    def __init__(self, matrix: PosDefMatrix):
        super().__init__(matrix.n, "gaussian entropy")
        self.matrix = matrix

    def _evaluate(self, mask: int) -> float:
        return 0.5 * (mask.bit_count() * LOG_TWO_PI_E + self.matrix.log_minor(mask))


def logdet_set_function(matrix: PosDefMatrix) -> LogDetSetFunction:
    return LogDetSetFunction(matrix)


def gaussian_entropy_set_function(matrix: PosDefMatrix) -> GaussianEntropySetFunction:
    return GaussianEntropySetFunction(matrix)


def gaussian_entropy(matrix: PosDefMatrix, subset: Iterable[int]) -> float:
    mask = to_mask(subset, matrix.n)
    if not mask:
        raise PreconditionError("Gaussian entropy needs a nonempty subset")
    return GaussianEntropySetFunction(matrix).value(mask)


class DeterminantSandwich(NamedTuple):
    log_lower: float
    log_det: float
    log_upper: float

    @property
    def lower(self) -> float:
        return math.exp(self.log_lower)

    @property
    def det(self) -> float:
        return math.exp(self.log_det)

    @property
    def upper(self) -> float:
        return math.exp(self.log_upper)

    def holds(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return (
            self.log_lower <= self.log_det + tolerance
            and self.log_det <= self.log_upper + tolerance
        )


def determinant_bounds(
    matrix: PosDefMatrix,
    hypergraph: Hypergraph,
    weighting: Weighting,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DeterminantSandwich:
    """Π (|K| / |K(s^c)|)^γ(s) <= |K| <= Π |K(s)|^γ(s) for a fractional partition γ."""
    require_class(hypergraph, weighting, WeightingClass.PARTITION)
    require_proper_edges(hypergraph)
    log_det = matrix.log_minor(full_mask(matrix.n))
    everything = full_mask(matrix.n)
    log_lower = log_upper = 0.0
    for mask, weight in zip(hypergraph.masks, weighting):
        log_upper += float(weight) * matrix.log_minor(mask)
        log_lower += float(weight) * (log_det - matrix.log_minor(everything & ~mask))
    result = DeterminantSandwich(log_lower, log_det, log_upper)
    logger.debug(f"Determinant sandwich {result}")
    if not result.holds(tolerance):
        raise InequalityViolation(f"determinantal sandwich fails: {result}")
    return result


class InequalityCheck(NamedTuple):
    """log lhs <= log rhs."""

    name: str
    log_lhs: float
    log_rhs: float

    @property
    def slack(self) -> float:
        return self.log_rhs - self.log_lhs

    def holds(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.slack >= -tolerance


def hadamard(matrix: PosDefMatrix) -> InequalityCheck:
    log_diagonal = float(np.sum(np.log(np.diag(matrix.entries))))
    return InequalityCheck("hadamard", matrix.log_minor(full_mask(matrix.n)), log_diagonal)


def fischer(matrix: PosDefMatrix, subset: Iterable[int]) -> InequalityCheck:
    mask = to_mask(subset, matrix.n)
    everything = full_mask(matrix.n)
    if not mask or mask == everything:
        raise PreconditionError("Fischer's inequality needs a nonempty proper subset")
    rhs = matrix.log_minor(mask) + matrix.log_minor(everything & ~mask)
    return InequalityCheck(f"fischer{list(from_mask(mask))}", matrix.log_minor(everything), rhs)


def szasz(matrix: PosDefMatrix, k: int) -> InequalityCheck:
    n = matrix.n
    if not 1 <= k <= n:
        raise PreconditionError(f"Szasz level k={k} out of range [1..{n}]")
    rhs = sum(matrix.log_minor(to_mask(s, n)) for s in itertools.combinations(range(1, n + 1), k))
    return InequalityCheck(f"szasz[{k}]", comb(n - 1, k - 1) * matrix.log_minor(full_mask(n)), rhs)


def classical_inequalities(
    matrix: PosDefMatrix,
    fischer_subsets: Sequence[Iterable[int]] | None = None,
    szasz_levels: Iterable[int] | None = None,
) -> list[InequalityCheck]:
    """Hadamard, Fischer and Szasz as special fractional partitions."""
    n = matrix.n
    if fischer_subsets is None:
        fischer_subsets = [tuple(range(1, n // 2 + 1))] if n >= 2 else []
    levels = range(1, n + 1) if szasz_levels is None else szasz_levels
    checks = [hadamard(matrix)]
    checks += [fischer(matrix, subset) for subset in fischer_subsets]
    checks += [szasz(matrix, k) for k in levels]
    return checks


class GaussianBridge(NamedTuple):
    determinant: DeterminantSandwich
    log_lower_from_entropy: float
    log_upper_from_entropy: float

    def agrees(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return (
            abs(self.determinant.log_lower - self.log_lower_from_entropy) <= tolerance
            and abs(self.determinant.log_upper - self.log_upper_from_entropy) <= tolerance
        )


def gaussian_bridge_check(
    matrix: PosDefMatrix,
    hypergraph: Hypergraph,
    weighting: Weighting,
    tolerance: float = DEFAULT_TOLERANCE,
) -> GaussianBridge:
    """Recover the determinantal bounds from the weak bounds on Gaussian entropy.

    For a partition Σ γ(s)|s| = n, so each weak bound on h is (n/2) log(2πe)
    plus half the log of the matching determinantal product.
    """
    h = gaussian_entropy_set_function(matrix)
    offset = 0.5 * matrix.n * LOG_TWO_PI_E
    determinant = determinant_bounds(matrix, hypergraph, weighting, tolerance)
    return GaussianBridge(
        determinant,
        2.0 * (weak_lower_bound(h, hypergraph, weighting, tolerance) - offset),
        2.0 * (weak_upper_bound(h, hypergraph, weighting, tolerance) - offset),
    )


def regular_determinant_check(
    matrix: PosDefMatrix, hypergraph: Hypergraph, tolerance: float = DEFAULT_TOLERANCE
) -> InequalityCheck:
    """|K|^r <= Π_s |K(s)| for an r-regular collection."""
    r = require_regular(hypergraph)
    check = InequalityCheck(
        f"regular[{r}]",
        r * matrix.log_minor(full_mask(matrix.n)),
        sum(matrix.log_minor(mask) for mask in hypergraph.masks),
    )
    if not check.holds(tolerance):
        raise InequalityViolation(f"|K|^{r} exceeds the product of minors: {check}")
    return check


def random_pd_matrix(
    n: int, rng: np.random.Generator, epsilon: float = DEFAULT_PD_EPSILON
) -> PosDefMatrix:
    """A·Aᵀ + εI with standard normal A."""
    a = rng.standard_normal((n, n))
    return PosDefMatrix(a @ a.T + epsilon * np.eye(n))


def matrix_from_dict(data: Mapping[str, Any]) -> PosDefMatrix:
    data = validate(MATRIX_SCHEMA, data, "matrix")
    n, rows = data["n"], data["rows"]
    if len(rows) != n or any(len(row) != n for row in rows):
        raise InputParseError(f"matrix rows do not form an {n}x{n} array")
    return PosDefMatrix(np.array(rows, dtype=float))


def matrix_to_dict(matrix: PosDefMatrix) -> dict[str, Any]:
    return {"n": matrix.n, "rows": matrix.entries.tolist()}
