"""Exact rational linear programming over dense tableaux.

Two-phase simplex with Bland's rule, so every run on the same program takes the
same pivots and returns the same vertex.
"""

import dataclasses
import enum
import random
from collections.abc import Sequence
from fractions import Fraction
from logging import getLogger
from typing import Any, NamedTuple

from .exceptions import InfeasibleProgramError, PreconditionError
from .hypergraph import (
    Hypergraph,
    Weighting,
    WeightingClass,
    classify_weighting,
)
from .utils import parse_rational

logger = getLogger(__name__)


class Sense(enum.StrEnum):
    GE = ">="
    LE = "<="
    EQ = "="


class Direction(enum.StrEnum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


class LpStatus(enum.StrEnum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _exact(value: Any) -> Fraction:
    return parse_rational(value, allow_float=True)


@dataclasses.dataclass(frozen=True)
class LinearProgram:
    """Optimize objective·x subject to rows·x (sense) rhs and x >= 0."""

    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    senses: tuple[Sense, ...]
    rhs: tuple[Fraction, ...]
    direction: Direction = Direction.MINIMIZE

    def __post_init__(self):
        objective = tuple(_exact(c) for c in self.objective)
        rows = tuple(tuple(_exact(a) for a in row) for row in self.rows)
        rhs = tuple(_exact(b) for b in self.rhs)
        senses = tuple(Sense(sense) for sense in self.senses)
        if not len(rows) == len(senses) == len(rhs):
            raise PreconditionError(
                f"{len(rows)} rows, {len(senses)} senses and {len(rhs)} right-hand sides"
            )
        for index, row in enumerate(rows):
            if len(row) != len(objective):
                raise PreconditionError(
                    f"row {index} has {len(row)} coefficients, expected {len(objective)}"
                )
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "direction", Direction(self.direction))

    @property
    def variable_count(self) -> int:
        return len(self.objective)

    def is_satisfied_by(self, assignment: Sequence[Fraction]) -> bool:
        if any(x < 0 for x in assignment):
            return False
        for row, sense, b in zip(self.rows, self.senses, self.rhs):
            lhs = sum((a * x for a, x in zip(row, assignment)), Fraction(0))
            if (
                (sense is Sense.GE and lhs < b)
                or (sense is Sense.LE and lhs > b)
                or (sense is Sense.EQ and lhs != b)
            ):
                return False
        return True

    def value_of(self, assignment: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.objective, assignment)), Fraction(0))


@dataclasses.dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    optimum: Fraction | None = None
    assignment: tuple[Fraction, ...] | None = None


class SimplexTableau:
    """Dense tableau for minimizing a cost vector over {x >= 0 : Ax = b}, b >= 0."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0

    def pivot(self, row: int, column: int) -> None:
        pivot_row = self.rows[row]
        factor = pivot_row[column]
        assert factor != 0, f"zero pivot at row {row}, column {column}"
        self.rows[row] = pivot_row = [value / factor for value in pivot_row]
        for index, other in enumerate(self.rows):
            if index != row and (scale := other[column]) != 0:
                self.rows[index] = [a - scale * p for a, p in zip(other, pivot_row)]
        self.basis[row] = column
        self.pivots += 1

    def reduced_costs(self, costs: Sequence[Fraction]) -> list[Fraction]:
        reduced = list(costs)
        for row, basic in zip(self.rows, self.basis):
            if (weight := costs[basic]) != 0:
                for column in range(self.width):
                    reduced[column] -= weight * row[column]
        return reduced

    def minimize(self, costs: Sequence[Fraction], allowed: int) -> LpStatus:
        """Run Bland's rule over columns [0, allowed) until optimal or unbounded."""
        while True:
            reduced = self.reduced_costs(costs)
            entering = next((j for j in range(allowed) if reduced[j] < 0), None)
            if entering is None:
                return LpStatus.OPTIMAL

            leaving = None
            best: tuple[Fraction, int] | None = None
            for index, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (row[-1] / row[entering], self.basis[index])
                    if best is None or key < best:
                        best, leaving = key, index
            if leaving is None:
                return LpStatus.UNBOUNDED
            logger.debug(f"Pivot #{self.pivots}: column {entering} enters, row {leaving} leaves")
            self.pivot(leaving, entering)

    def objective_value(self, costs: Sequence[Fraction]) -> Fraction:
        pairs = zip(self.rows, self.basis)
        return sum((costs[basic] * row[-1] for row, basic in pairs), Fraction(0))

    def assignment(self, size: int) -> tuple[Fraction, ...]:
        values = [Fraction(0)] * size
        for row, basic in zip(self.rows, self.basis):
            if basic < size:
                values[basic] = row[-1]
        return tuple(values)

    def drop_artificials(self, first_artificial: int) -> None:
        """Pivot zero-valued artificials out of the basis, deleting redundant rows."""
        for index in reversed(range(len(self.rows))):
            if self.basis[index] < first_artificial:
                continue
            row = self.rows[index]
            assert row[-1] == 0, "artificial variable left positive after phase one"
            column = next((j for j in range(first_artificial) if row[j] != 0), None)
            if column is None:
                del self.rows[index]
                del self.basis[index]
            else:
                self.pivot(index, column)


def solve(program: LinearProgram) -> LpSolution:
    size = program.variable_count
    sign = 1 if program.direction is Direction.MINIMIZE else -1
    costs = [sign * c for c in program.objective]

    # Normalize to nonnegative right-hand sides
    normalized = []
    for row, sense, b in zip(program.rows, program.senses, program.rhs):
        if b < 0:
            row, b = tuple(-a for a in row), -b
            sense = {Sense.GE: Sense.LE, Sense.LE: Sense.GE, Sense.EQ: Sense.EQ}[sense]
        normalized.append((row, sense, b))

    slack_rows = [index for index, (_, sense, _) in enumerate(normalized) if sense is not Sense.EQ]
    artificial_rows = [
        index for index, (_, sense, _) in enumerate(normalized) if sense is not Sense.LE
    ]
    first_slack = size
    first_artificial = size + len(slack_rows)
    width = first_artificial + len(artificial_rows)

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    for index, (row, sense, b) in enumerate(normalized):
        tableau_row = list(row) + [Fraction(0)] * (width - size) + [b]
        if sense is not Sense.EQ:
            slack = first_slack + slack_rows.index(index)
            tableau_row[slack] = Fraction(1 if sense is Sense.LE else -1)
            if sense is Sense.LE:
                basis.append(slack)
        if sense is not Sense.LE:
            artificial = first_artificial + artificial_rows.index(index)
            tableau_row[artificial] = Fraction(1)
            basis.append(artificial)
        rows.append(tableau_row)

    tableau = SimplexTableau(rows, basis)
    if artificial_rows:
        phase_one = [Fraction(0)] * first_artificial + [Fraction(1)] * len(artificial_rows)
        status = tableau.minimize(phase_one, width)
        assert status is LpStatus.OPTIMAL, "phase one is bounded below by zero"
        if tableau.objective_value(phase_one) > 0:
            logger.debug(f"Infeasible after {tableau.pivots} pivots")
            return LpSolution(LpStatus.INFEASIBLE)
        tableau.drop_artificials(first_artificial)
        for row in tableau.rows:
            del row[first_artificial:-1]

    phase_two = costs + [Fraction(0)] * len(slack_rows)
    status = tableau.minimize(phase_two, first_artificial)
    if status is LpStatus.UNBOUNDED:
        logger.debug(f"Unbounded after {tableau.pivots} pivots")
        return LpSolution(LpStatus.UNBOUNDED)

    assignment = tableau.assignment(size)
    assert program.is_satisfied_by(assignment), "simplex returned an infeasible vertex"
    optimum = program.value_of(assignment)
    logger.debug(f"Optimum {optimum} after {tableau.pivots} pivots")
    return LpSolution(LpStatus.OPTIMAL, optimum, assignment)


class OptimalWeighting(NamedTuple):
    weighting: Weighting
    optimum: Fraction


def _incidence_rows(hypergraph: Hypergraph) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(int(i in edge) for edge in hypergraph.edges) for i in range(1, hypergraph.n + 1)
    )


def _edge_values(hypergraph: Hypergraph, values: Sequence[Any] | None, what: str) -> list[Fraction]:
    if values is None:
        return [Fraction(1)] * len(hypergraph)
    exact = [_exact(value) for value in values]
    if len(exact) != len(hypergraph):
        raise PreconditionError(f"{len(exact)} {what} for {len(hypergraph)} edges")
    return exact


def _weighting_program(
    hypergraph: Hypergraph, objective: Sequence[Fraction], sense: Sense, direction: Direction
) -> LinearProgram:
    return LinearProgram(
        objective=tuple(objective),
        rows=_incidence_rows(hypergraph),
        senses=(sense,) * hypergraph.n,
        rhs=(Fraction(1),) * hypergraph.n,
        direction=direction,
    )


def optimal_fractional_covering(
    hypergraph: Hypergraph, costs: Sequence[Any] | None = None
) -> OptimalWeighting:
    exact = _edge_values(hypergraph, costs, "costs")
    if any(cost < 0 for cost in exact):
        raise PreconditionError("covering costs must be nonnegative")
    if missing := hypergraph.uncovered():
        raise InfeasibleProgramError(f"no fractional covering: index {missing[0]} is in no edge")

    solution = solve(_weighting_program(hypergraph, exact, Sense.GE, Direction.MINIMIZE))
    if solution.status is not LpStatus.OPTIMAL:
        raise InfeasibleProgramError(f"covering program is {solution.status}")
    assert solution.assignment is not None and solution.optimum is not None
    weighting = Weighting(solution.assignment)
    assert classify_weighting(hypergraph, weighting).is_covering
    return OptimalWeighting(weighting, solution.optimum)


def optimal_fractional_packing(
    hypergraph: Hypergraph, rewards: Sequence[Any] | None = None
) -> OptimalWeighting:
    exact = _edge_values(hypergraph, rewards, "rewards")
    if any(reward < 0 for reward in exact):
        raise PreconditionError("packing rewards must be nonnegative")

    solution = solve(_weighting_program(hypergraph, exact, Sense.LE, Direction.MAXIMIZE))
    assert solution.status is LpStatus.OPTIMAL, "packing program is bounded and feasible at 0"
    assert solution.assignment is not None and solution.optimum is not None
    weighting = Weighting(solution.assignment)
    assert classify_weighting(hypergraph, weighting).is_packing
    return OptimalWeighting(weighting, solution.optimum)


def optimal_fractional_partition(
    hypergraph: Hypergraph, objective: Sequence[Any], direction: Direction
) -> OptimalWeighting:
    exact = _edge_values(hypergraph, objective, "objective values")
    solution = solve(_weighting_program(hypergraph, exact, Sense.EQ, direction))
    if solution.status is not LpStatus.OPTIMAL:
        raise InfeasibleProgramError(f"partition program is {solution.status}")
    assert solution.assignment is not None and solution.optimum is not None
    return OptimalWeighting(Weighting(solution.assignment), solution.optimum)


def random_fractional_partition(
    hypergraph: Hypergraph, rng: random.Random, vertices: int = 3
) -> Weighting:
    """Random convex combination of partition-polytope vertices found under random objectives."""
    if missing := hypergraph.uncovered():
        raise InfeasibleProgramError(f"no fractional partition: index {missing[0]} is in no edge")

    found = []
    for _ in range(vertices):
        objective = [rng.randint(0, 9) for _ in hypergraph.edges]
        found.append(optimal_fractional_partition(hypergraph, objective, Direction.MINIMIZE))

    mix = [Fraction(rng.randint(1, 5)) for _ in found]
    total = sum(mix, Fraction(0))
    values = [
        sum((m * vertex.weighting[position] for m, vertex in zip(mix, found)), Fraction(0)) / total
        for position in range(len(hypergraph))
    ]
    weighting = Weighting(tuple(values))
    assert classify_weighting(hypergraph, weighting) is WeightingClass.PARTITION
    return weighting


class BoundWeightings(NamedTuple):
    lower: OptimalWeighting
    upper: OptimalWeighting


def optimal_bound_weightings(
    hypergraph: Hypergraph,
    upper_costs: Sequence[float],
    lower_rewards: Sequence[float],
    partitions_only: bool = True,
) -> BoundWeightings:
    """Weightings giving the tightest strong bounds for the given per-edge conditional values.

    upper_costs are f(s|<s), lower_rewards are f(s | s^c minus >s). Coverings and
    packings are only searched when partitions_only is False.
    """
    if partitions_only:
        upper = optimal_fractional_partition(hypergraph, upper_costs, Direction.MINIMIZE)
        lower = optimal_fractional_partition(hypergraph, lower_rewards, Direction.MAXIMIZE)
    else:
        upper = optimal_fractional_covering(hypergraph, upper_costs)
        lower = optimal_fractional_packing(hypergraph, lower_rewards)
    logger.info(f"LP-optimal weightings: lower {lower.weighting}, upper {upper.weighting}")
    return BoundWeightings(lower, upper)
