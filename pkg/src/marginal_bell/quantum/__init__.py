"""Born-rule marginals, violation scans and scan profiles."""

from .config import (
    SCAN_PROFILES,
    ScanProfile,
    find_profiles_directory,
    list_available_profiles,
    load_scan_profile,
)
from .scan import (
    GHZ_AXES,
    ZUKOWSKI_BOUND,
    GhzReport,
    HardyScanReport,
    ViolationReport,
    algebraic_minimum,
    candidate_axes,
    ghz_check,
    hardy_probability,
    hardy_scan,
    refine_axes,
    violation_scan,
)
from .states import (
    MINUS_X_AXIS,
    MINUS_Y_AXIS,
    MINUS_Z_AXIS,
    NAMED_AXES,
    NAMED_STATES,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    AxisChoice,
    BlochAxis,
    PureState,
    basis_state,
    born_marginals,
    ghz,
    hardy_state,
    outcome_probabilities,
    planar_axis,
    product_state,
    single_party_probabilities,
    singlet,
)

__all__ = [
    "AxisChoice",
    "BlochAxis",
    "GHZ_AXES",
    "GhzReport",
    "HardyScanReport",
    "MINUS_X_AXIS",
    "MINUS_Y_AXIS",
    "MINUS_Z_AXIS",
    "NAMED_AXES",
    "NAMED_STATES",
    "PureState",
    "SCAN_PROFILES",
    "ScanProfile",
    "ViolationReport",
    "X_AXIS",
    "Y_AXIS",
    "ZUKOWSKI_BOUND",
    "Z_AXIS",
    "algebraic_minimum",
    "basis_state",
    "born_marginals",
    "candidate_axes",
    "find_profiles_directory",
    "ghz",
    "ghz_check",
    "hardy_probability",
    "hardy_scan",
    "hardy_state",
    "list_available_profiles",
    "load_scan_profile",
    "outcome_probabilities",
    "planar_axis",
    "product_state",
    "refine_axes",
    "single_party_probabilities",
    "singlet",
    "violation_scan",
]
