"""Core domain models and services."""

from .config import MarginalBellConfig, dict_to_config, get_config, reload_config, set_config
from .errors import (
    IncompleteMarginalsError,
    InvalidAssignmentError,
    InvalidDistributionError,
    InvalidIndexError,
    InvalidScenarioError,
    InvalidStateError,
    MarginalBellError,
    SolverLimitError,
    UnsupportedFormError,
)
from .models import (
    FLOAT_TOLERANCE,
    ArithmeticMode,
    GridIndex,
    Number,
    OutcomeAssignment,
    Outcomes,
    Scenario,
    SettingVector,
)
from .scenario import (
    cell_to_flat,
    decode_cell,
    encode_cell,
    flat_to_cell,
    iter_cells,
    marginal_support,
    support_bitset,
    support_indices,
)
from .underlying import (
    TWO_BY_TWO,
    FactorizationReport,
    FullHiddenVariableDist,
    LocalReduction,
    MarginalSet,
    MarginalTable,
    SingleSiteSet,
    UnderlyingDist,
    check_factorization,
    embed_local,
    full_marginals,
    marginalize,
    marginalize_all,
    product_dist,
    random_rho,
    reduce_local,
)

__all__ = [
    "ArithmeticMode",
    "FLOAT_TOLERANCE",
    "FactorizationReport",
    "FullHiddenVariableDist",
    "GridIndex",
    "IncompleteMarginalsError",
    "InvalidAssignmentError",
    "InvalidDistributionError",
    "InvalidIndexError",
    "InvalidScenarioError",
    "InvalidStateError",
    "LocalReduction",
    "MarginalBellConfig",
    "MarginalBellError",
    "MarginalSet",
    "MarginalTable",
    "Number",
    "OutcomeAssignment",
    "Outcomes",
    "Scenario",
    "SettingVector",
    "SingleSiteSet",
    "SolverLimitError",
    "TWO_BY_TWO",
    "UnderlyingDist",
    "UnsupportedFormError",
    "cell_to_flat",
    "check_factorization",
    "decode_cell",
    "dict_to_config",
    "embed_local",
    "encode_cell",
    "flat_to_cell",
    "full_marginals",
    "get_config",
    "iter_cells",
    "marginal_support",
    "marginalize",
    "marginalize_all",
    "product_dist",
    "random_rho",
    "reduce_local",
    "reload_config",
    "set_config",
    "support_bitset",
    "support_indices",
]
