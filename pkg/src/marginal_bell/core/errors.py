"""Exception hierarchy shared by every marginal-bell package.

Input errors derive from ``ValueError`` so callers that only care about bad input
can keep catching the builtin. Solver failures are ``RuntimeError``s.
"""
from __future__ import annotations


class MarginalBellError(ValueError):
    """Base class for input errors raised by the library."""


class InvalidScenarioError(MarginalBellError):
    """Scenario parameters are out of range or heterogeneous."""


class InvalidAssignmentError(MarginalBellError):
    """An outcome assignment has the wrong length or non-binary entries."""


class InvalidIndexError(MarginalBellError):
    """A grid index, setting vector or outcome tuple is out of range."""


class InvalidDistributionError(MarginalBellError):
    """Weights are negative, unnormalized, or mix arithmetic modes."""


class IncompleteMarginalsError(MarginalBellError):
    """A marginal set is missing tables for some setting vectors."""


class UnsupportedFormError(MarginalBellError):
    """A linear form falls outside what an operation supports."""


class InvalidStateError(MarginalBellError):
    """A quantum state or axis choice is malformed or unnormalized."""


class SolverLimitError(RuntimeError):
    """The simplex stopped at its pivot limit before reaching a verdict."""


__all__ = [
    "IncompleteMarginalsError",
    "InvalidAssignmentError",
    "InvalidDistributionError",
    "InvalidIndexError",
    "InvalidScenarioError",
    "InvalidStateError",
    "MarginalBellError",
    "SolverLimitError",
    "UnsupportedFormError",
]
