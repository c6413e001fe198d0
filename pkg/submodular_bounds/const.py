"""Constants for the submodular bounds toolkit."""

DOMAIN = "submodular_bounds"

CONF_TOLERANCE = "tolerance"
CONF_LOG_BASE = "log_base"
CONF_ENUMERATION_LIMIT = "enumeration_limit"
CONF_HOM_GUARD = "hom_guard"
CONF_INDEPENDENT_SET_LIMIT = "independent_set_limit"
CONF_TENSORIZATION_GUARD = "tensorization_guard"
CONF_ALLOW_LARGE = "allow_large"

DEFAULT_TOLERANCE = 1e-9
DEFAULT_LOG_BASE = "e"
DEFAULT_ENUMERATION_LIMIT = 20
DEFAULT_HOM_GUARD = 10**8
DEFAULT_INDEPENDENT_SET_LIMIT = 40
DEFAULT_TENSORIZATION_GUARD = 10**6
DEFAULT_ALLOW_LARGE = False

LOG_BASES = ("e", "2")

# Pivots below this fraction of the largest diagonal entry reject a matrix as not PD
PD_PIVOT_RATIO = 1e-10
SYMMETRY_TOLERANCE = 1e-12
DEFAULT_PD_EPSILON = 1e-3

DEFAULT_ENTROPY_POWER_EXPONENT = 2

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_RESOURCE_GUARD = 4
EXIT_INEQUALITY_VIOLATION = 5
