import math
import random
from fractions import Fraction

import pytest

from submodular_bounds.entropy import (
    JointDistribution,
    Units,
    conditional_entropy,
    conditional_entropy_counterexample,
    conditional_entropy_set_function,
    correlations,
    distribution_from_dict,
    distribution_to_dict,
    entropy_power_bound,
    entropy_power_monotonicity,
    entropy_set_function,
    erasure_entropy,
    han_averages,
    joint_entropy,
    marginal,
    multi_information,
    point_mass,
    product_distribution,
    uniform_on,
)
from submodular_bounds.exceptions import (
    InputParseError,
    OverlapError,
    PreconditionError,
)
from submodular_bounds.hypergraph import Weighting, k_sets
from submodular_bounds.setfn import is_submodular, k_set_gaps
from tests.test_data.utils import FAIR_BITS, random_pmf

LN2 = math.log(2)


# ----- distributions -----
def test_distribution_normalizes_support():
    distribution = JointDistribution((2, 2), {(0, 0): "1/2", (1, 1): Fraction(1, 2), (0, 1): 0})
    assert distribution.support == ((0, 0), (1, 1))
    assert distribution.probability((1, 0)) == 0


@pytest.mark.parametrize(
    ("sizes", "pmf"),
    [
        ((2,), {(0,): "1/2"}),
        ((2,), {(2,): 1}),
        ((2, 2), {(0,): 1}),
        ((2,), {(0,): "3/2", (1,): "-1/2"}),
        ((0,), {}),
    ],
)
def test_invalid_distributions_raise(sizes, pmf):
    with pytest.raises(PreconditionError):
        JointDistribution(sizes, pmf)


def test_distribution_dict_round_trip(correlated):
    assert distribution_from_dict(distribution_to_dict(correlated)) == correlated


def test_distribution_schema_errors():
    with pytest.raises(InputParseError):
        distribution_from_dict({"alphabet_sizes": [2], "pmf": [{"x": [0], "p": 0.5}]})
    with pytest.raises(InputParseError):
        distribution_from_dict({"pmf": []})


@pytest.mark.parametrize(
    "pmf",
    [
        [{"x": [0], "p": 1}],
        [{"x": [0, 2], "p": 1}],
        [{"x": [0, 0], "p": "1/2"}, {"x": [0, 0], "p": "1/2"}],
        [{"x": [0, 0], "p": "1/2"}],
    ],
)
def test_malformed_distribution_files_are_parse_errors(pmf):
    with pytest.raises(InputParseError, match="invalid distribution"):
        distribution_from_dict({"alphabet_sizes": [2, 2], "pmf": pmf})


def test_marginal_of_correlated_bits(correlated):
    first = marginal(correlated, (1,))
    assert first.pmf == {(0,): Fraction(1, 2), (1,): Fraction(1, 2)}


# ----- entropies -----
def test_fair_bits_entropy():
    distribution = distribution_from_dict(FAIR_BITS)
    assert joint_entropy(distribution, (1, 2)).value == pytest.approx(2 * LN2)
    assert joint_entropy(distribution, (1, 2), Units.BITS).value == pytest.approx(2)
    assert conditional_entropy(distribution, (2,), (1,), Units.BITS).value == pytest.approx(1)
    assert float(joint_entropy(distribution, ())) == 0


def test_point_mass_has_zero_entropy():
    f = entropy_set_function(point_mass((3, 2), (2, 1)))
    assert f.total == 0


def test_overlapping_conditional_entropy_raises(correlated):
    with pytest.raises(OverlapError):
        conditional_entropy(correlated, (1, 2), (2,))


@pytest.mark.parametrize("seed", range(20))
def test_entropy_is_submodular_and_bounded(seed):
    distribution = random_pmf(seed)
    f = entropy_set_function(distribution)
    assert is_submodular(f).holds
    assert 0 <= f.total <= sum(math.log(a) for a in distribution.alphabet_sizes) + 1e-12


def test_product_distribution_entropy_is_additive():
    distribution = product_distribution([["1/3", "2/3"], ["1/4", "1/4", "1/2"]])
    f = entropy_set_function(distribution)
    assert f.total == pytest.approx(f((1,)) + f((2,)))
    assert multi_information(distribution) == pytest.approx(0, abs=1e-12)


# ----- correlation measures -----
@pytest.mark.parametrize("seed", range(20))
def test_multi_information_is_singleton_upper_gap(seed):
    distribution = random_pmf(seed)
    f = entropy_set_function(distribution)
    gaps = k_set_gaps(f, 1)
    assert multi_information(distribution) == pytest.approx(gaps.upper, abs=1e-9)
    erasure = erasure_entropy(distribution).value
    assert f.total - erasure == pytest.approx(gaps.lower, abs=1e-9)


def test_correlations_at_full_level_vanish(correlated):
    assert correlations(correlated, 3) == pytest.approx((0, 0), abs=1e-12)
    assert correlations(correlated, 1).total > 0


@pytest.mark.parametrize("seed", range(20))
def test_han_averages_are_monotone(seed):
    distribution = random_pmf(seed)
    averages = han_averages(distribution)
    upper, lower = averages.upper, averages.lower
    assert all(b <= a + 1e-9 for a, b in zip(upper, upper[1:]))
    assert all(a <= b + 1e-9 for a, b in zip(lower, lower[1:]))
    assert upper[-1] == pytest.approx(lower[-1])


@pytest.mark.parametrize("exponent", [1, 2, 3.5])
def test_entropy_power_bound(correlated, exponent):
    halves = Weighting.uniform(3, Fraction(1, 2))
    result = entropy_power_bound(correlated, k_sets(3, 2), halves, exponent)
    assert sum(result.weights) == 1
    assert result.lhs <= result.rhs + 1e-9


def test_entropy_power_needs_partition_and_positive_exponent(correlated):
    with pytest.raises(PreconditionError):
        entropy_power_bound(correlated, k_sets(3, 2), Weighting.uniform(3))
    with pytest.raises(PreconditionError):
        entropy_power_monotonicity(correlated, exponent=0)


@pytest.mark.parametrize("seed", range(15))
def test_entropy_power_averages_increase(seed):
    sequence = entropy_power_monotonicity(random_pmf(seed))
    assert all(a <= b * (1 + 1e-9) for a, b in zip(sequence, sequence[1:]))


# ----- conditional entropy is not submodular -----
def test_counterexample_values():
    example = conditional_entropy_counterexample()
    assert example.determined == pytest.approx(0, abs=1e-12)
    assert example.undetermined == pytest.approx(LN2)
    assert example.deficit == pytest.approx(LN2)
    assert (example.s, example.t) == ((1, 3), (3, 4))


def test_counterexample_in_bits():
    assert conditional_entropy_counterexample(Units.BITS).undetermined == pytest.approx(1)


def test_conditional_entropy_first_witness():
    example = conditional_entropy_counterexample()
    check = is_submodular(conditional_entropy_set_function(example.distribution))
    assert not check.holds
    assert (check.witness.s, check.witness.t) == ((1,), (4,))
    assert check.witness.deficit == pytest.approx(LN2)


@pytest.mark.parametrize("seed", range(10))
def test_conditional_entropy_sums_to_joint_on_partitions(seed):
    distribution = random_pmf(seed)
    rng = random.Random(seed)
    conditional = conditional_entropy_set_function(distribution)
    f = entropy_set_function(distribution)
    # consecutive blocks of the natural order telescope to H(X_[n])
    cuts = sorted(rng.sample(range(1, distribution.n), rng.randint(0, distribution.n - 1)))
    bounds = [1, *[c + 1 for c in cuts], distribution.n + 1]
    blocks = [tuple(range(a, b)) for a, b in zip(bounds, bounds[1:])]
    assert sum(conditional(block) for block in blocks) == pytest.approx(f.total)


def test_uniform_on_support():
    distribution = uniform_on((2, 2), [(0, 0), (1, 1)])
    assert entropy_set_function(distribution).total == pytest.approx(LN2)
