import itertools
import logging
import random
from fractions import Fraction

import numpy as np
import pytest

from submodular_bounds.const import DEFAULT_TOLERANCE
from submodular_bounds.detineq import (
    PosDefMatrix,
    gaussian_entropy_set_function,
    logdet_set_function,
)
from submodular_bounds.entropy import entropy_set_function, random_distribution
from submodular_bounds.exceptions import (
    ClassificationError,
    InputParseError,
    MonotonicityError,
    OverlapError,
    PreconditionError,
    ResourceGuardError,
)
from submodular_bounds.hypergraph import Hypergraph, Weighting, k_sets, random_hypergraph
from submodular_bounds.lp import random_fractional_partition
from submodular_bounds.setfn import (
    GroundOrder,
    bound_report,
    chain_rule_sum,
    check_enumerable,
    conditional,
    degree_form_bounds,
    fractional_subadditivity_check,
    gap_duality_check,
    gap_monotonicity_sequence,
    is_nondecreasing,
    is_submodular,
    is_supermodular,
    k_set_gaps,
    modular_set_function,
    prefix_nondecreasing,
    regular_gap_pair,
    strong_lower_bound,
    strong_upper_bound,
    submodularity_deficit,
    table_set_function,
    weak_gaps,
    weak_lower_bound,
    weak_upper_bound,
)
from tests.test_data.utils import (
    random_covered_hypergraph,
    random_matrix,
    random_pmf,
    random_regular_collection,
)

TOLERANCE = DEFAULT_TOLERANCE

# f({1}) = 2, f({2}) = 3, f({1,2}) = 4
PAIR_TABLE = {(1,): 2, (2,): 3, (1, 2): 4}


# ----- set functions -----
def test_table_function_values_are_exact():
    f = table_set_function(2, PAIR_TABLE)
    assert f(()) == 0
    assert f((1, 2)) == 4
    assert isinstance(f.total, Fraction)
    assert conditional(f, (2,), (1,)) == 2


def test_table_function_needs_every_subset():
    with pytest.raises(PreconditionError):
        table_set_function(2, {(1,): 1, (2,): 1})


def test_conditioning_on_an_overlapping_set_raises():
    f = modular_set_function([1, 2])
    with pytest.raises(OverlapError):
        conditional(f, (1,), (1, 2))


@pytest.mark.parametrize("seed", range(50))
def test_more_conditioning_never_increases_entropy(seed):
    f = entropy_set_function(random_pmf(seed))
    # each index goes to s, t, u or nowhere
    for labels in itertools.product(range(4), repeat=f.n):
        s, t, u = ([i for i, label in enumerate(labels, 1) if label == part] for part in range(3))
        if s:
            assert conditional(f, s, t + u) <= conditional(f, s, t) + TOLERANCE


def test_subsets_outside_ground_set_raise():
    with pytest.raises(PreconditionError):
        modular_set_function([1, 2])((3,))


def test_submodularity_witness():
    f = table_set_function(2, {(1,): 1, (2,): 1, (1, 2): 3})
    check = is_submodular(f)
    assert not check.holds
    assert check.witness.s == (1,)
    assert check.witness.t == (2,)
    assert check.witness.deficit == 1
    assert submodularity_deficit(f, (1,), (2,)) == 1
    assert is_supermodular(f).holds


def test_modular_functions_are_submodular_and_supermodular():
    f = modular_set_function([1, "1/2", -3])
    assert is_submodular(f).holds
    assert is_supermodular(f).holds
    assert not is_nondecreasing(f)


def test_enumeration_guard():
    with pytest.raises(ResourceGuardError):
        check_enumerable(21)
    check_enumerable(21, allow_large=True)


# ----- orders and the chain rule -----
def test_ground_order_neighbourhoods():
    order = GroundOrder((2, 3, 1))
    assert order.preceding(0b100) == 0b010
    assert order.following(0b100) == 0b001
    assert list(order.prefixes()) == [0b010, 0b110, 0b111]
    assert str(order) == "2,3,1"
    assert str(GroundOrder.natural(3)) == "natural"


def test_invalid_orders_raise():
    with pytest.raises(PreconditionError):
        GroundOrder((1, 1))
    with pytest.raises(PreconditionError):
        chain_rule_sum(modular_set_function([1, 2]), GroundOrder.natural(3))


@pytest.mark.parametrize("seed", range(100))
def test_chain_rule_under_every_order(seed):
    f = entropy_set_function(random_pmf(seed))
    for order in GroundOrder.all_orders(f.n):
        assert chain_rule_sum(f, order) == pytest.approx(f.total, abs=TOLERANCE)


# ----- bounds -----
def test_exact_bounds_for_two_elements():
    f = table_set_function(2, PAIR_TABLE)
    singletons = k_sets(2, 1)
    ones = Weighting.uniform(2)
    assert weak_lower_bound(f, singletons, ones) == 3
    assert strong_lower_bound(f, singletons, ones) == 4
    assert strong_upper_bound(f, singletons, ones) == 4
    assert weak_upper_bound(f, singletons, ones) == 5


def test_modular_function_meets_both_bounds():
    f = modular_set_function([1, 2, 3])
    pairs = k_sets(3, 2)
    halves = Weighting.uniform(3, Fraction(1, 2))
    assert strong_upper_bound(f, pairs, halves) == 6
    assert strong_lower_bound(f, pairs, halves) == 6
    assert weak_upper_bound(f, pairs, halves) == 6


@pytest.mark.parametrize("seed", range(200))
def test_bounds_are_nested_around_entropy(seed):
    rng = random.Random(seed)
    f = entropy_set_function(random_pmf(seed))
    hypergraph = random_covered_hypergraph(f.n, rng)
    weighting = random_fractional_partition(hypergraph, rng)
    order = GroundOrder(tuple(rng.sample(range(1, f.n + 1), f.n)))

    weak_lower = weak_lower_bound(f, hypergraph, weighting)
    strong_lower = strong_lower_bound(f, hypergraph, weighting, order)
    strong_upper = strong_upper_bound(f, hypergraph, weighting, order)
    weak_upper = weak_upper_bound(f, hypergraph, weighting)
    assert weak_lower <= strong_lower + TOLERANCE
    assert strong_lower <= f.total + TOLERANCE
    assert f.total <= strong_upper + TOLERANCE
    assert strong_upper <= weak_upper + TOLERANCE


def test_covering_needs_prefix_monotonicity():
    f = modular_set_function([1, -2])
    covering = Weighting.of([2, 1])
    assert not prefix_nondecreasing(f)
    with pytest.raises(MonotonicityError):
        strong_upper_bound(f, k_sets(2, 1), covering)
    # in reverse order the prefixes are -2, -1
    assert strong_upper_bound(f, k_sets(2, 1), covering, GroundOrder((2, 1))) == 0


def test_covering_is_accepted_for_nondecreasing_functions(correlated, caplog):
    f = entropy_set_function(correlated)
    with caplog.at_level(logging.WARNING):
        upper = strong_upper_bound(f, k_sets(3, 2), Weighting.uniform(3))
    assert upper >= f.total
    assert "not a partition" in caplog.text


def test_continuous_functions_need_partitions():
    h = gaussian_entropy_set_function(PosDefMatrix(2 * np.eye(2)))
    with pytest.raises(ClassificationError):
        weak_upper_bound(h, k_sets(2, 1), Weighting.of([2, 1]))


def test_packing_on_upper_side_is_refused():
    f = modular_set_function([1, 1])
    with pytest.raises(ClassificationError):
        strong_upper_bound(f, k_sets(2, 1), Weighting.of(["1/2", 1]))


# ----- forms -----
@pytest.mark.parametrize(
    ("form", "lower", "upper"),
    [
        ("weak", 3, 5),
        ("strong", 4, 4),
        ("degree", 4, 4),
    ],
)
def test_bound_report_forms(form, lower, upper):
    f = table_set_function(2, PAIR_TABLE)
    ones = Weighting.uniform(2)
    report = bound_report(f, k_sets(2, 1), ones, ones, form=form)
    assert (report.lower, report.exact, report.upper) == (lower, 4, upper)
    assert report.holds()
    assert report.as_dict()["form"] == form


def test_weak_form_needs_weightings():
    f = table_set_function(2, PAIR_TABLE)
    with pytest.raises(PreconditionError):
        bound_report(f, k_sets(2, 1), form="weak")


def test_unknown_form_is_a_parse_error():
    f = table_set_function(2, PAIR_TABLE)
    with pytest.raises(InputParseError):
        bound_report(f, k_sets(2, 1), form="medium")


def test_degree_form_on_non_quasiregular_collection(correlated):
    f = entropy_set_function(correlated)
    hypergraph = Hypergraph(3, ((1, 2), (2, 3), (3,)))
    report = degree_form_bounds(f, hypergraph)
    assert report.lower <= f.total + TOLERANCE
    assert report.upper >= f.total - TOLERANCE


# ----- gaps -----
@pytest.mark.parametrize("seed", range(20))
def test_gap_duality(seed):
    rng = random.Random(seed)
    f = entropy_set_function(random_distribution((2, 2, 3), rng))
    # no edge is all of [3], so every partition has weight above 1
    base = random_hypergraph(3, rng.randint(1, 4), rng)
    proper = tuple(edge for edge in base.edges if len(edge) < 3)
    hypergraph = Hypergraph(3, proper + ((1,), (2,), (3,)))
    weighting = random_fractional_partition(hypergraph, rng)
    duality = gap_duality_check(f, hypergraph, weighting)
    assert duality.weight > 1
    assert duality.agrees(TOLERANCE)


@pytest.mark.parametrize(("k", "r"), [(1, 1), (2, 3), (3, 3)])
def test_regular_gap_ratio(k, r):
    f = entropy_set_function(random_distribution((2, 2, 2, 2), random.Random(k)))
    gaps = regular_gap_pair(f, k_sets(4, k))
    assert gaps.r == r
    assert gaps.predicted_ratio == Fraction(r, len(k_sets(4, k)) - r)
    assert gaps.agrees(TOLERANCE)


@pytest.mark.parametrize("seed", range(20))
def test_regular_gap_ratio_on_random_collections(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    hypergraph = random_regular_collection(rng.randint(3, 5), r, rng)
    f = entropy_set_function(random_distribution((2,) * hypergraph.n, rng))
    gaps = regular_gap_pair(f, hypergraph)
    assert gaps.r == r
    assert gaps.predicted_ratio == Fraction(r, len(hypergraph) - r)
    assert gaps.agrees(TOLERANCE)


def test_regular_gap_pair_needs_proper_complement(correlated):
    with pytest.raises(PreconditionError):
        regular_gap_pair(entropy_set_function(correlated), Hypergraph(3, ((1, 2, 3),)))


def test_k_set_gaps_of_singletons_are_weak_gaps(correlated):
    f = entropy_set_function(correlated)
    assert k_set_gaps(f, 1) == pytest.approx(
        tuple(weak_gaps(f, k_sets(3, 1), Weighting.uniform(3)))
    )
    with pytest.raises(PreconditionError):
        k_set_gaps(f, 4)


@pytest.mark.parametrize("seed", range(100))
def test_gap_sequences_decrease_to_zero(seed):
    f = entropy_set_function(random_pmf(seed, n_max=5))
    sequences = gap_monotonicity_sequence(f)
    assert len(sequences.upper) == f.n
    assert sequences.nonincreasing(TOLERANCE)
    assert sequences.terminates_at_zero(TOLERANCE)
    assert all(gap >= -TOLERANCE for gap in sequences.upper + sequences.lower)


@pytest.mark.parametrize("seed", range(50))
def test_log_det_gap_sequences_decrease_to_zero(seed):
    f = logdet_set_function(random_matrix(seed, n_max=5))
    sequences = gap_monotonicity_sequence(f)
    assert len(sequences.lower) == f.n
    assert sequences.nonincreasing(TOLERANCE)
    assert sequences.terminates_at_zero(TOLERANCE)


def test_fractional_subadditivity_of_entropy(correlated, rng):
    assert fractional_subadditivity_check(entropy_set_function(correlated), 10, rng)


def test_fractional_subadditivity_of_indicator_of_nonempty(rng):
    # f(s) = min(|s|, 1)
    f = table_set_function(
        3, {s: min(len(s), 1) for k in (1, 2, 3) for s in itertools.combinations((1, 2, 3), k)}
    )
    assert fractional_subadditivity_check(f, 20, rng)
    halves = Weighting.uniform(3, Fraction(1, 2))
    assert weak_upper_bound(f, k_sets(3, 2), halves) == Fraction(3, 2)
    assert f.total == 1
