"""Local-model membership via exact or floating-point linear feasibility."""

from .membership import (
    CrossValidationReport,
    FeasibilityProblem,
    FineReport,
    MembershipResult,
    MembershipVerdict,
    SeparatingExample,
    check_fine,
    cross_validate,
    default_hint_forms,
    membership,
    sample_no_signaling,
    separating_example,
)
from .simplex import LPResult, LPStatus, solve_lp

__all__ = [
    "CrossValidationReport",
    "FeasibilityProblem",
    "FineReport",
    "LPResult",
    "LPStatus",
    "MembershipResult",
    "MembershipVerdict",
    "SeparatingExample",
    "check_fine",
    "cross_validate",
    "default_hint_forms",
    "membership",
    "sample_no_signaling",
    "separating_example",
    "solve_lp",
]
