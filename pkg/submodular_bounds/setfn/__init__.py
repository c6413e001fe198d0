"""Set functions on [n] and the fractional bound machinery built on them."""

from .base import (
    CallableSetFunction,
    GroundOrder,
    ModularityCheck,
    ModularSetFunction,
    NegatedSetFunction,
    SetFunction,
    TableSetFunction,
    Value,
    Violation,
    chain_rule_sum,
    check_enumerable,
    conditional,
    conditional_mask,
    is_nondecreasing,
    is_submodular,
    is_supermodular,
    iter_violations,
    modular_set_function,
    prefix_nondecreasing,
    submodularity_deficit,
    table_set_function,
)
from .bounds import (
    BoundReport,
    check_bound_weighting,
    strong_lower_bound,
    strong_upper_bound,
    weak_lower_bound,
    weak_upper_bound,
)
from .forms import BoundForms, BoundRequest, bound_report, degree_form_bounds
from .gaps import (
    GapDuality,
    GapSequences,
    RegularGaps,
    WeakGaps,
    fractional_subadditivity_check,
    gap_duality_check,
    gap_monotonicity_sequence,
    k_set_gaps,
    regular_gap_pair,
    weak_gaps,
)

__all__ = [
    "BoundForms",
    "BoundReport",
    "BoundRequest",
    "CallableSetFunction",
    "GapDuality",
    "GapSequences",
    "GroundOrder",
    "ModularSetFunction",
    "ModularityCheck",
    "NegatedSetFunction",
    "RegularGaps",
    "SetFunction",
    "TableSetFunction",
    "Value",
    "Violation",
    "WeakGaps",
    "bound_report",
    "chain_rule_sum",
    "check_bound_weighting",
    "check_enumerable",
    "conditional",
    "conditional_mask",
    "degree_form_bounds",
    "fractional_subadditivity_check",
    "gap_duality_check",
    "gap_monotonicity_sequence",
    "is_nondecreasing",
    "is_submodular",
    "is_supermodular",
    "iter_violations",
    "k_set_gaps",
    "modular_set_function",
    "prefix_nondecreasing",
    "regular_gap_pair",
    "strong_lower_bound",
    "strong_upper_bound",
    "submodularity_deficit",
    "table_set_function",
    "weak_gaps",
    "weak_lower_bound",
    "weak_upper_bound",
]
