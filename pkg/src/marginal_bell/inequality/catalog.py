"""Named inequality families: Hardy variants, CHSH branches, n-party and three-axis forms."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from marginal_bell.core import (
    FLOAT_TOLERANCE,
    TWO_BY_TWO,
    ArithmeticMode,
    InvalidScenarioError,
    MarginalSet,
    Number,
    Scenario,
    SettingVector,
)

from .forms import (
    HardyDeduction,
    LinearForm,
    MarginalTerm,
    correlation_form,
    evaluate,
    expand,
    hardy_deduce,
    term,
)

logger = logging.getLogger(__name__)

THREE_PARTY = Scenario(parties=3, settings=2)
THREE_AXES = Scenario(parties=2, settings=3)


def _require(scenario: Scenario, expected: Scenario, what: str) -> None:
    if scenario != expected:
        raise InvalidScenarioError(
            f"{what} needs n={expected.parties}, m={expected.settings}; "
            f"got n={scenario.parties}, m={scenario.settings}"
        )


def n_party_hardy(n: int) -> LinearForm:
    """One-hot zero terms plus the all-ones term, minus the all-zeros term."""

    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InvalidScenarioError(f"n_party_hardy needs n >= 2, got {n!r}")
    scenario = Scenario(parties=n, settings=2)
    zeros = (0,) * n
    ones = (1,) * n
    terms = [
        term(tuple(1 if p == q else 0 for p in range(n)), zeros) for q in range(n)
    ]
    terms.append(term(ones, ones))
    terms.append(term(zeros, zeros, -1))
    return LinearForm.build(scenario, terms, name=f"hardy-{n}")


def _hardy_leg(form: LinearForm) -> SettingVector:
    return form.negative_terms[0].settings


def _transform(
    item: MarginalTerm, swaps: Tuple[int, ...], flips: Tuple[Tuple[int, int], ...]
) -> MarginalTerm:
    settings = tuple(s ^ swaps[p] for p, s in enumerate(item.settings))
    outcomes = tuple(o ^ flips[p][item.settings[p]] for p, o in enumerate(item.outcomes))
    return MarginalTerm(settings, outcomes, item.coefficient)


@lru_cache(maxsize=1)
def _hardy_family() -> Tuple[LinearForm, ...]:
    base = n_party_hardy(2)
    seen: Dict[Tuple[object, ...], LinearForm] = {}
    for swaps in itertools.product((0, 1), repeat=2):
        for flip_bits in itertools.product((0, 1), repeat=4):
            flips = ((flip_bits[0], flip_bits[1]), (flip_bits[2], flip_bits[3]))
            image = LinearForm.build(
                TWO_BY_TWO, (_transform(item, swaps, flips) for item in base.terms)
            )
            seen.setdefault(image.canonical_key(), image)
    forms = sorted(
        seen.values(),
        key=lambda form: (_hardy_leg(form), form.negative_terms[0].outcomes, form.terms),
    )
    named = []
    for _, group in itertools.groupby(
        forms, key=lambda form: (_hardy_leg(form), form.negative_terms[0].outcomes)
    ):
        for ordinal, form in enumerate(group):
            leg = "".join(map(str, _hardy_leg(form)))
            target = "".join(map(str, form.negative_terms[0].outcomes))
            named.append(form.named(f"hardy[{leg}:{target}]#{ordinal}"))
    logger.debug("hardy family closed at %d forms", len(named))
    return tuple(named)


def catalog_hardy(scenario: Scenario = TWO_BY_TWO) -> Tuple[LinearForm, ...]:
    """All images of the two-party Hardy form under axis swaps and outcome flips.

    The group acting here swaps the two axes of either party and flips the
    outcome of any single (party, axis) pair, 64 elements in all, and the base
    form has a trivial stabilizer. The result is sorted by leg, then target
    outcomes, then terms.
    """

    _require(scenario, TWO_BY_TWO, "catalog_hardy")
    return _hardy_family()


def same_leg_hardy_forms(leg: Sequence[int]) -> Tuple[LinearForm, ...]:
    """The four catalog forms ``F(x, y)`` whose positive terms share the target outcomes.

    ``F(x, y) = P_{a'b}(x,y) + P_{ab'}(x,y) + P_{a'b'}(1-x,1-y) - P_{ab}(x,y)``
    with ``a' = 1 - a`` and ``b' = 1 - b``.
    """

    a, b = TWO_BY_TWO.validate_settings(leg)
    forms = []
    for x, y in TWO_BY_TWO.outcome_tuples():
        forms.append(
            LinearForm.build(
                TWO_BY_TWO,
                (
                    term((1 - a, b), (x, y)),
                    term((a, 1 - b), (x, y)),
                    term((1 - a, 1 - b), (1 - x, 1 - y)),
                    term((a, b), (x, y), -1),
                ),
                name=f"hardy[{a}{b}:{x}{y}]",
            )
        )
    return tuple(forms)


def _chsh_sum(leg: SettingVector) -> LinearForm:
    """``sum_{s != leg} C_s - C_leg`` lowered to marginals."""

    total = LinearForm(TWO_BY_TWO)
    for vector in TWO_BY_TWO.setting_vectors():
        total = total + correlation_form(TWO_BY_TWO, vector, -1 if vector == leg else 1)
    return total


def chsh_form(leg: Sequence[int]) -> Tuple[LinearForm, LinearForm]:
    """``(2 - S, 2 + S)`` with ``S = sum_{s != leg} C_s - C_leg``."""

    vector = TWO_BY_TWO.validate_settings(leg)
    label = "".join(map(str, vector))
    signed = _chsh_sum(vector)
    upper = (LinearForm(TWO_BY_TWO, constant=Fraction(2)) - signed).named(f"chsh[{label}:upper]")
    lower = (LinearForm(TWO_BY_TWO, constant=Fraction(2)) + signed).named(f"chsh[{label}:lower]")
    return upper, lower


def chsh_catalog() -> Tuple[LinearForm, ...]:
    """Both branches for every leg, legs in setting-vector order."""

    forms: List[LinearForm] = []
    for leg in TWO_BY_TWO.setting_vectors():
        forms.extend(chsh_form(leg))
    return tuple(forms)


@dataclass(frozen=True, slots=True)
class ChshDecomposition:
    """``branch`` expands to ``multiplicity`` times the summed expansion of ``parts``."""

    branch: LinearForm
    parts: Tuple[LinearForm, ...]
    multiplicity: int = 2

    def verify(self) -> bool:
        combined = expand(self.parts[0])
        for part in self.parts[1:]:
            combined = combined + expand(part)
        return expand(self.branch) == combined.scaled(self.multiplicity)


def chsh_decomposition(leg: Sequence[int]) -> Dict[str, ChshDecomposition]:
    """Split each CHSH branch of ``leg`` into same-leg Hardy forms.

    The upper branch is twice ``F(0,1) + F(1,0)`` and the lower branch twice
    ``F(0,0) + F(1,1)``, so both branches together are twice the sum of all
    four same-leg forms.
    """

    upper, lower = chsh_form(leg)
    f00, f01, f10, f11 = same_leg_hardy_forms(leg)
    return {
        "upper": ChshDecomposition(branch=upper, parts=(f01, f10)),
        "lower": ChshDecomposition(branch=lower, parts=(f00, f11)),
        "both": ChshDecomposition(branch=upper + lower, parts=(f00, f01, f10, f11)),
    }


def zukowski_form() -> LinearForm:
    """``2 + C_111 - C_001 - C_010 - C_100`` on three parties."""

    form = LinearForm(THREE_PARTY, constant=Fraction(2))
    form = form + correlation_form(THREE_PARTY, (1, 1, 1))
    for vector in ((0, 0, 1), (0, 1, 0), (1, 0, 0)):
        form = form + correlation_form(THREE_PARTY, vector, -1)
    return form.named("zukowski")


@dataclass(frozen=True, slots=True)
class GhzCorollary:
    """Perfect correlations on the mixed settings force ``C_111 = 1``."""

    deductions: Tuple[HardyDeduction, ...]

    @property
    def holds(self) -> bool:
        return all(item.deducible for item in self.deductions)


def ghz_corollary() -> GhzCorollary:
    """Zero odd-parity outcomes on 001, 010, 100 imply zero odd-parity outcomes on 111."""

    odd = [o for o in THREE_PARTY.outcome_tuples() if sum(o) % 2]
    zeros = [term(vector, o) for vector in ((0, 0, 1), (0, 1, 0), (1, 0, 0)) for o in odd]
    deductions = tuple(hardy_deduce(THREE_PARTY, zeros, term((1, 1, 1), o)) for o in odd)
    return GhzCorollary(deductions=deductions)


def three_axes_form() -> LinearForm:
    """``P_00(1,1) + P_10(0,0) + P_02(0,0) - P_12(0,0)`` with three axes per party."""

    return LinearForm.build(
        THREE_AXES,
        (
            term((0, 0), (1, 1)),
            term((1, 0), (0, 0)),
            term((0, 2), (0, 0)),
            term((1, 2), (0, 0), -1),
        ),
        name="three-axes",
    )


BELL_PREMISE = term((0, 0), (1, 1))


def bell_corollary_form() -> Tuple[LinearForm, MarginalTerm]:
    """The three-term inequality valid once ``P_00(1,1) = 0``, and that premise."""

    form = LinearForm.build(
        THREE_AXES,
        (term((1, 0), (0, 0)), term((0, 2), (0, 0)), term((1, 2), (0, 0), -1)),
        name="bell-corollary",
    )
    return form, BELL_PREMISE


@dataclass(frozen=True, slots=True)
class BellCorollaryReport:
    premise_value: Number
    premise_holds: bool
    value: Number
    satisfied: bool

    @property
    def violated(self) -> bool:
        """Premise met yet the inequality fails."""

        return self.premise_holds and not self.satisfied


def bell_corollary_check(ms: MarginalSet, tol: Optional[float] = None) -> BellCorollaryReport:
    """Evaluate the conditional inequality on observed marginals."""

    _require(ms.scenario, THREE_AXES, "bell_corollary_check")
    form, premise = bell_corollary_form()
    exact = ms.mode is ArithmeticMode.RATIONAL
    threshold = 0.0 if exact else (FLOAT_TOLERANCE if tol is None else tol)
    premise_value = ms.prob(premise.settings, premise.outcomes)
    value = evaluate(form, ms)
    return BellCorollaryReport(
        premise_value=premise_value,
        premise_holds=abs(premise_value) <= threshold,
        value=value,
        satisfied=value >= -threshold,
    )


__all__ = [
    "BELL_PREMISE",
    "BellCorollaryReport",
    "ChshDecomposition",
    "GhzCorollary",
    "THREE_AXES",
    "THREE_PARTY",
    "bell_corollary_check",
    "bell_corollary_form",
    "catalog_hardy",
    "chsh_catalog",
    "chsh_decomposition",
    "chsh_form",
    "ghz_corollary",
    "n_party_hardy",
    "same_leg_hardy_forms",
    "three_axes_form",
    "zukowski_form",
]
