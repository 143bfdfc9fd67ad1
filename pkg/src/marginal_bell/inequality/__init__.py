"""Linear forms, certificates and inequality catalogs."""

from .catalog import (
    BELL_PREMISE,
    THREE_AXES,
    THREE_PARTY,
    BellCorollaryReport,
    ChshDecomposition,
    GhzCorollary,
    bell_corollary_check,
    bell_corollary_form,
    catalog_hardy,
    chsh_catalog,
    chsh_decomposition,
    chsh_form,
    ghz_corollary,
    n_party_hardy,
    same_leg_hardy_forms,
    three_axes_form,
    zukowski_form,
)
from .forms import (
    CellCoefficients,
    Certificate,
    HardyDeduction,
    LinearForm,
    MarginalTerm,
    Verdict,
    certify,
    correlation,
    correlation_form,
    evaluate,
    expand,
    hardy_deduce,
    term,
)
from .search import CoverSearchResult, contains_form, search_covers

__all__ = [
    "BELL_PREMISE",
    "BellCorollaryReport",
    "CellCoefficients",
    "Certificate",
    "ChshDecomposition",
    "CoverSearchResult",
    "GhzCorollary",
    "HardyDeduction",
    "LinearForm",
    "MarginalTerm",
    "THREE_AXES",
    "THREE_PARTY",
    "Verdict",
    "bell_corollary_check",
    "bell_corollary_form",
    "catalog_hardy",
    "certify",
    "chsh_catalog",
    "chsh_decomposition",
    "chsh_form",
    "contains_form",
    "correlation",
    "correlation_form",
    "evaluate",
    "expand",
    "hardy_deduce",
    "ghz_corollary",
    "n_party_hardy",
    "same_leg_hardy_forms",
    "search_covers",
    "term",
    "three_axes_form",
    "zukowski_form",
]
