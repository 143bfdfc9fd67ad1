"""Linear forms over marginal probabilities and their cell-cover certificates.

A form ``c + sum_t k_t P_{s_t}(o_t)`` is expanded onto the cells of the
underlying grid: every marginal is a partial sum of nonnegative weights and the
constant rides on the normalization ``sum ρ = 1``. If every expanded cell
coefficient is nonnegative the form is nonnegative for every ρ.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from marginal_bell.core import (
    ArithmeticMode,
    GridIndex,
    MarginalSet,
    MarginalTable,
    Number,
    Outcomes,
    Scenario,
    SettingVector,
    UnderlyingDist,
    UnsupportedFormError,
    cell_to_flat,
    flat_to_cell,
    support_bitset,
    support_indices,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


def _rational(value: object) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise UnsupportedFormError(f"form coefficients must be exact rationals, got {value!r}")
    return Fraction(value)


@dataclass(frozen=True, slots=True, order=True)
class MarginalTerm:
    """``coefficient * P_settings(outcomes)``."""

    settings: SettingVector
    outcomes: Outcomes
    coefficient: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "settings", tuple(self.settings))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "coefficient", _rational(self.coefficient))

    @property
    def key(self) -> Tuple[SettingVector, Outcomes]:
        return self.settings, self.outcomes

    def label(self) -> str:
        settings = "".join(str(value) for value in self.settings)
        outcomes = ",".join(str(value) for value in self.outcomes)
        return f"P_{settings}({outcomes})"

    def scaled(self, factor: Fraction) -> "MarginalTerm":
        return MarginalTerm(self.settings, self.outcomes, self.coefficient * factor)


def term(settings: Sequence[int], outcomes: Sequence[int], coefficient: Rational = 1) -> MarginalTerm:
    """Shorthand constructor used by catalogs and tests."""

    return MarginalTerm(tuple(settings), tuple(outcomes), Fraction(coefficient))


@dataclass(frozen=True, slots=True)
class LinearForm:
    """Signed rational combination of marginal terms plus a constant, read as ``>= 0``.

    Terms sharing (settings, outcomes) are merged and zero terms dropped, so two
    forms compare equal exactly when their canonical term lists agree.
    """

    scenario: Scenario
    terms: Tuple[MarginalTerm, ...] = ()
    constant: Fraction = Fraction(0)
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        merged: Dict[Tuple[SettingVector, Outcomes], Fraction] = {}
        for item in self.terms:
            settings = self.scenario.validate_settings(item.settings)
            outcomes = self.scenario.validate_outcomes(item.outcomes)
            merged[(settings, outcomes)] = merged.get((settings, outcomes), Fraction(0)) + item.coefficient
        terms = tuple(
            MarginalTerm(settings, outcomes, coefficient)
            for (settings, outcomes), coefficient in sorted(merged.items())
            if coefficient != 0
        )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "constant", _rational(self.constant))

    @classmethod
    def build(
        cls,
        scenario: Scenario,
        terms: Iterable[MarginalTerm],
        constant: Rational = 0,
        name: str = "",
    ) -> "LinearForm":
        return cls(scenario=scenario, terms=tuple(terms), constant=Fraction(constant), name=name)

    def named(self, name: str) -> "LinearForm":
        return LinearForm(self.scenario, self.terms, self.constant, name)

    def _check_compatible(self, other: "LinearForm") -> None:
        if other.scenario != self.scenario:
            raise UnsupportedFormError("cannot combine forms over different scenarios")

    def __add__(self, other: "LinearForm") -> "LinearForm":
        self._check_compatible(other)
        return LinearForm(self.scenario, self.terms + other.terms, self.constant + other.constant)

    def __neg__(self) -> "LinearForm":
        return self * -1

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def __mul__(self, factor: Rational) -> "LinearForm":
        scale = _rational(factor)
        return LinearForm(
            self.scenario,
            tuple(item.scaled(scale) for item in self.terms),
            self.constant * scale,
        )

    __rmul__ = __mul__

    @property
    def positive_terms(self) -> Tuple[MarginalTerm, ...]:
        return tuple(item for item in self.terms if item.coefficient > 0)

    @property
    def negative_terms(self) -> Tuple[MarginalTerm, ...]:
        return tuple(item for item in self.terms if item.coefficient < 0)

    def canonical_key(self) -> Tuple[object, ...]:
        return (self.scenario.parties, self.scenario.settings, self.constant, self.terms)

    def describe(self) -> str:
        """Human readable ``... >= 0`` rendering."""

        parts: List[str] = []
        if self.constant:
            parts.append(str(self.constant))
        for item in self.terms:
            magnitude = abs(item.coefficient)
            prefix = "" if magnitude == 1 else f"{magnitude} "
            sign = "-" if item.coefficient < 0 else "+"
            if not parts:
                parts.append(f"{'-' if sign == '-' else ''}{prefix}{item.label()}")
            else:
                parts.append(f"{sign} {prefix}{item.label()}")
        body = " ".join(parts) if parts else "0"
        return f"{body} >= 0"


@dataclass(frozen=True, slots=True)
class CellCoefficients:
    """Expansion of a form onto cells, in flat-index order."""

    scenario: Scenario
    values: Tuple[Fraction, ...]

    def at(self, cell: GridIndex) -> Fraction:
        return self.values[cell_to_flat(self.scenario, cell)]

    def items(self) -> Iterable[Tuple[GridIndex, Fraction]]:
        for flat, value in enumerate(self.values):
            yield flat_to_cell(self.scenario, flat), value

    def __add__(self, other: "CellCoefficients") -> "CellCoefficients":
        if other.scenario != self.scenario:
            raise UnsupportedFormError("cannot add expansions over different scenarios")
        return CellCoefficients(
            self.scenario, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def scaled(self, factor: Rational) -> "CellCoefficients":
        scale = Fraction(factor)
        return CellCoefficients(self.scenario, tuple(value * scale for value in self.values))

    def positive_cells(self) -> Tuple[GridIndex, ...]:
        return tuple(cell for cell, value in self.items() if value > 0)


class Verdict(str, Enum):
    PROVEN = "proven"
    REFUTED = "refuted"


@dataclass(frozen=True, slots=True)
class Certificate:
    """Exact verdict on ``form >= 0`` for every underlying distribution.

    ``zeros`` lists marginal terms assumed to vanish; cells inside their
    supports are excluded from the check.
    """

    form: LinearForm
    cells: CellCoefficients
    verdict: Verdict
    witness: Optional[GridIndex] = None
    counterexample: Optional[UnderlyingDist] = None
    zeros: Tuple[Tuple[SettingVector, Outcomes], ...] = ()

    @property
    def proven(self) -> bool:
        return self.verdict is Verdict.PROVEN


@dataclass(frozen=True, slots=True)
class HardyDeduction:
    """Whether zero marginals force ``target`` to vanish for every ρ."""

    target: MarginalTerm
    zeros: Tuple[MarginalTerm, ...]
    deducible: bool
    uncovered: Optional[GridIndex] = None
    counterexample: Optional[UnderlyingDist] = None


def expand(form: LinearForm) -> CellCoefficients:
    """Cell coefficient = constant + sum of coefficients of terms whose support holds the cell."""

    scenario = form.scenario
    values = [form.constant] * scenario.cell_count
    for item in form.terms:
        for flat in support_indices(scenario, item.settings, item.outcomes):
            values[flat] += item.coefficient
    return CellCoefficients(scenario=scenario, values=tuple(values))


def _excluded_cells(scenario: Scenario, zeros: Sequence[Tuple[SettingVector, Outcomes]]) -> int:
    excluded = 0
    for settings, outcomes in zeros:
        excluded |= support_bitset(scenario, settings, outcomes)
    return excluded


def _zero_keys(
    scenario: Scenario, zeros: Iterable[Union[MarginalTerm, Tuple[Sequence[int], Sequence[int]]]]
) -> Tuple[Tuple[SettingVector, Outcomes], ...]:
    keys = []
    for item in zeros:
        settings, outcomes = item.key if isinstance(item, MarginalTerm) else item
        keys.append((scenario.validate_settings(settings), scenario.validate_outcomes(outcomes)))
    return tuple(sorted(set(keys)))


def certify(
    form: LinearForm,
    zeros: Iterable[Union[MarginalTerm, Tuple[Sequence[int], Sequence[int]]]] = (),
) -> Certificate:
    """Prove ``form >= 0`` by entrywise nonnegativity, or refute it with a point mass."""

    scenario = form.scenario
    cells = expand(form)
    zero_keys = _zero_keys(scenario, zeros)
    excluded = _excluded_cells(scenario, zero_keys)

    for flat, value in enumerate(cells.values):
        if value < 0 and not (excluded >> flat) & 1:
            witness = flat_to_cell(scenario, flat)
            logger.debug("refuted %s at cell %s (coefficient %s)", form.describe(), witness, value)
            return Certificate(
                form=form,
                cells=cells,
                verdict=Verdict.REFUTED,
                witness=witness,
                counterexample=UnderlyingDist.point_mass(scenario, witness),
                zeros=zero_keys,
            )
    return Certificate(form=form, cells=cells, verdict=Verdict.PROVEN, zeros=zero_keys)


def evaluate(form: LinearForm, ms: MarginalSet) -> Number:
    """Substitute observed marginals into ``form``; exact for rational marginal sets."""

    if ms.scenario != form.scenario:
        raise UnsupportedFormError(
            f"form scenario {form.scenario} does not match marginal set {ms.scenario}"
        )
    if ms.mode is ArithmeticMode.RATIONAL:
        exact = form.constant
        for item in form.terms:
            exact += item.coefficient * ms.prob(item.settings, item.outcomes)
        return exact
    approx = float(form.constant)
    for item in form.terms:
        approx += float(item.coefficient) * float(ms.prob(item.settings, item.outcomes))
    return approx


def hardy_deduce(
    scenario: Scenario, zeros: Sequence[MarginalTerm], target: MarginalTerm
) -> HardyDeduction:
    """Deducible iff the target's support lies inside the union of the zero supports."""

    target_settings = scenario.validate_settings(target.settings)
    target_outcomes = scenario.validate_outcomes(target.outcomes)
    covered = _excluded_cells(scenario, _zero_keys(scenario, zeros))
    for flat in support_indices(scenario, target_settings, target_outcomes):
        if not (covered >> flat) & 1:
            cell = flat_to_cell(scenario, flat)
            return HardyDeduction(
                target=target,
                zeros=tuple(zeros),
                deducible=False,
                uncovered=cell,
                counterexample=UnderlyingDist.point_mass(scenario, cell),
            )
    return HardyDeduction(target=target, zeros=tuple(zeros), deducible=True)


def correlation(table: MarginalTable) -> Number:
    """C_s = sum_o (-1)^(parity of o) P_s(o)."""

    total: Number = Fraction(0) if table.mode is ArithmeticMode.RATIONAL else 0.0
    for outcomes, value in table.items():
        total += -value if sum(outcomes) % 2 else value
    return total


def correlation_form(
    scenario: Scenario, settings: Sequence[int], coefficient: Rational = 1
) -> LinearForm:
    """``coefficient * C_settings`` lowered to marginal terms."""

    vector = scenario.validate_settings(settings)
    scale = Fraction(coefficient)
    return LinearForm(
        scenario,
        tuple(
            MarginalTerm(vector, outcomes, -scale if sum(outcomes) % 2 else scale)
            for outcomes in scenario.outcome_tuples()
        ),
    )


__all__ = [
    "CellCoefficients",
    "Certificate",
    "HardyDeduction",
    "LinearForm",
    "MarginalTerm",
    "Verdict",
    "certify",
    "correlation",
    "correlation_form",
    "evaluate",
    "expand",
    "hardy_deduce",
    "term",
]
