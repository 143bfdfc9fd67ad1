"""Wire schemas for scenarios, distributions, forms, certificates and reports."""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from marginal_bell.core import (
    ArithmeticMode,
    InvalidDistributionError,
    InvalidStateError,
    MarginalSet,
    MarginalTable,
    Number,
    Scenario,
    UnderlyingDist,
)
from marginal_bell.inequality import Certificate, HardyDeduction, LinearForm, MarginalTerm
from marginal_bell.polytope import MembershipResult
from marginal_bell.quantum import (
    NAMED_AXES,
    AxisChoice,
    BlochAxis,
    GhzReport,
    HardyScanReport,
    PureState,
    ViolationReport,
)


class RationalModel(BaseModel):
    num: int
    den: int = Field(default=1, gt=0)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "RationalModel":
        exact = Fraction(value)
        return cls(num=exact.numerator, den=exact.denominator)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)


# Exact values travel as {"num", "den"} or bare ints; floats stay floats.
NumberValue = Union[RationalModel, int, float]


def number_to_wire(value: Number) -> NumberValue:
    if isinstance(value, Fraction):
        return RationalModel.from_fraction(value)
    return float(value)


def number_from_wire(value: NumberValue) -> Number:
    if isinstance(value, RationalModel):
        return value.to_fraction()
    if isinstance(value, int):
        return Fraction(value)
    return float(value)


def _is_exact(value: NumberValue) -> bool:
    return isinstance(value, (RationalModel, int))


def outcome_key(outcomes: Tuple[int, ...]) -> str:
    """Bitstring with party 0 first: ``"01"`` is Alice 0, Bob 1."""

    return "".join(str(bit) for bit in outcomes)


def parse_outcome_key(key: str) -> Tuple[int, ...]:
    if not key or any(ch not in "01" for ch in key):
        raise ValueError(f"outcome key {key!r} must be a bitstring")
    return tuple(int(ch) for ch in key)


class ScenarioModel(BaseModel):
    parties: int = Field(..., ge=1)
    settings: int = Field(..., ge=1)

    @classmethod
    def from_domain(cls, scenario: Scenario) -> "ScenarioModel":
        return cls(parties=scenario.parties, settings=scenario.settings)

    def to_domain(self) -> Scenario:
        return Scenario(parties=self.parties, settings=self.settings)


class WeightEntry(BaseModel):
    """One nonzero cell of ρ: exact ``num``/``den`` or a float ``value``."""

    cell: List[int]
    num: Optional[int] = None
    den: Optional[int] = Field(default=None, gt=0)
    value: Optional[float] = None

    @model_validator(mode="after")
    def validate_value(self) -> "WeightEntry":
        exact = self.num is not None
        if exact == (self.value is not None):
            raise ValueError("weight entry needs either num/den or value")
        return self

    def weight(self) -> Number:
        if self.num is not None:
            return Fraction(self.num, self.den or 1)
        assert self.value is not None
        return self.value


class UnderlyingDistModel(BaseModel):
    scenario: ScenarioModel
    mode: ArithmeticMode = ArithmeticMode.RATIONAL
    weights: List[WeightEntry]

    @classmethod
    def from_domain(cls, rho: UnderlyingDist) -> "UnderlyingDistModel":
        entries = []
        for cell, weight in rho.cells().items():
            if isinstance(weight, Fraction):
                entries.append(
                    WeightEntry(cell=list(cell), num=weight.numerator, den=weight.denominator)
                )
            else:
                entries.append(WeightEntry(cell=list(cell), value=float(weight)))
        return cls(
            scenario=ScenarioModel.from_domain(rho.scenario), mode=rho.mode, weights=entries
        )

    def to_domain(self) -> UnderlyingDist:
        scenario = self.scenario.to_domain()
        cells: Dict[Tuple[int, ...], Number] = {}
        for entry in self.weights:
            cell = tuple(entry.cell)
            if cell in cells:
                raise InvalidDistributionError(f"cell {list(cell)} listed twice")
            weight = entry.weight()
            if self.mode is ArithmeticMode.RATIONAL and isinstance(weight, float):
                raise InvalidDistributionError("rational distributions need num/den weights")
            cells[cell] = weight
        return UnderlyingDist.from_cells(scenario, cells, self.mode)


class MarginalTableModel(BaseModel):
    settings: List[int]
    probs: Dict[str, NumberValue]

    @classmethod
    def from_domain(cls, table: MarginalTable) -> "MarginalTableModel":
        return cls(
            settings=list(table.settings),
            probs={outcome_key(o): number_to_wire(p) for o, p in table.items()},
        )


class MarginalSetModel(BaseModel):
    """Tables keyed by outcome bitstrings; omitted outcomes have probability 0."""

    scenario: Optional[ScenarioModel] = None
    mode: Optional[ArithmeticMode] = None
    tables: List[MarginalTableModel] = Field(..., min_length=1)

    @classmethod
    def from_domain(cls, ms: MarginalSet) -> "MarginalSetModel":
        return cls(
            scenario=ScenarioModel.from_domain(ms.scenario),
            mode=ms.mode,
            tables=[MarginalTableModel.from_domain(table) for table in ms.tables],
        )

    def resolved_mode(self) -> ArithmeticMode:
        if self.mode is not None:
            return self.mode
        exact = all(_is_exact(v) for table in self.tables for v in table.probs.values())
        return ArithmeticMode.RATIONAL if exact else ArithmeticMode.FLOAT

    def resolved_scenario(self) -> Scenario:
        """Scenario as given, or read off the tables: one entry per party, largest setting + 1."""

        if self.scenario is not None:
            return self.scenario.to_domain()
        parties = len(self.tables[0].settings)
        settings = max(max(table.settings, default=0) for table in self.tables) + 1
        return Scenario(parties=parties, settings=settings)

    def to_domain(self) -> MarginalSet:
        scenario = self.resolved_scenario()
        mode = self.resolved_mode()
        tables = []
        for table in self.tables:
            settings = scenario.validate_settings(table.settings)
            values: Dict[Tuple[int, ...], Number] = {}
            for key, raw in table.probs.items():
                outcomes = scenario.validate_outcomes(parse_outcome_key(key))
                value = number_from_wire(raw)
                if mode is ArithmeticMode.RATIONAL and isinstance(value, float):
                    raise InvalidDistributionError(
                        f"table {key!r} holds a float in a rational marginal set"
                    )
                values[outcomes] = value
            zero: Number = Fraction(0) if mode is ArithmeticMode.RATIONAL else 0.0
            probs = tuple(values.get(o, zero) for o in scenario.outcome_tuples())
            tables.append(MarginalTable(scenario=scenario, settings=settings, probs=probs, mode=mode))
        return MarginalSet(scenario=scenario, tables=tuple(tables), mode=mode)


class TermModel(BaseModel):
    settings: List[int]
    outcomes: List[int]
    coef: Union[RationalModel, int] = 1

    @classmethod
    def from_domain(cls, item: MarginalTerm) -> "TermModel":
        return cls(
            settings=list(item.settings),
            outcomes=list(item.outcomes),
            coef=RationalModel.from_fraction(item.coefficient),
        )

    def to_domain(self) -> MarginalTerm:
        coefficient = self.coef.to_fraction() if isinstance(self.coef, RationalModel) else self.coef
        return MarginalTerm(tuple(self.settings), tuple(self.outcomes), Fraction(coefficient))


class LinearFormModel(BaseModel):
    scenario: ScenarioModel
    constant: Union[RationalModel, int] = 0
    terms: List[TermModel] = Field(default_factory=list)
    name: str = ""

    @classmethod
    def from_domain(cls, form: LinearForm) -> "LinearFormModel":
        return cls(
            scenario=ScenarioModel.from_domain(form.scenario),
            constant=RationalModel.from_fraction(form.constant),
            terms=[TermModel.from_domain(item) for item in form.terms],
            name=form.name,
        )

    def to_domain(self) -> LinearForm:
        constant = (
            self.constant.to_fraction()
            if isinstance(self.constant, RationalModel)
            else Fraction(self.constant)
        )
        return LinearForm.build(
            self.scenario.to_domain(),
            (term.to_domain() for term in self.terms),
            constant,
            name=self.name,
        )


class CellCoefficientModel(BaseModel):
    cell: List[int]
    num: int
    den: int


class CertificateModel(BaseModel):
    form: LinearFormModel
    description: str
    verdict: str
    witness: Optional[List[int]] = None
    counterexample: Optional[UnderlyingDistModel] = None
    zeros: List[TermModel] = Field(default_factory=list)
    cells: List[CellCoefficientModel]

    @classmethod
    def from_domain(cls, certificate: Certificate) -> "CertificateModel":
        return cls(
            form=LinearFormModel.from_domain(certificate.form),
            description=certificate.form.describe(),
            verdict=certificate.verdict.value,
            witness=list(certificate.witness) if certificate.witness is not None else None,
            counterexample=(
                UnderlyingDistModel.from_domain(certificate.counterexample)
                if certificate.counterexample is not None
                else None
            ),
            zeros=[
                TermModel(settings=list(s), outcomes=list(o)) for s, o in certificate.zeros
            ],
            cells=[
                CellCoefficientModel(cell=list(cell), num=value.numerator, den=value.denominator)
                for cell, value in certificate.cells.items()
            ],
        )


class DeductionRequest(BaseModel):
    scenario: ScenarioModel
    zeros: List[TermModel]
    target: TermModel


class DeductionModel(BaseModel):
    deducible: bool
    target: TermModel
    zeros: List[TermModel]
    uncovered: Optional[List[int]] = None
    counterexample: Optional[UnderlyingDistModel] = None

    @classmethod
    def from_domain(cls, deduction: HardyDeduction) -> "DeductionModel":
        return cls(
            deducible=deduction.deducible,
            target=TermModel.from_domain(deduction.target),
            zeros=[TermModel.from_domain(item) for item in deduction.zeros],
            uncovered=list(deduction.uncovered) if deduction.uncovered is not None else None,
            counterexample=(
                UnderlyingDistModel.from_domain(deduction.counterexample)
                if deduction.counterexample is not None
                else None
            ),
        )


class MembershipResultModel(BaseModel):
    verdict: str
    witness: Optional[UnderlyingDistModel] = None
    residual: float
    hint: Optional[str] = None
    hint_value: Optional[NumberValue] = None
    pivots: int

    @classmethod
    def from_domain(cls, result: MembershipResult) -> "MembershipResultModel":
        return cls(
            verdict=result.verdict.value,
            witness=(
                UnderlyingDistModel.from_domain(result.witness) if result.witness is not None else None
            ),
            residual=result.residual,
            hint=(result.hint.name or result.hint.describe()) if result.hint is not None else None,
            hint_value=number_to_wire(result.hint_value) if result.hint_value is not None else None,
            pivots=result.pivots,
        )


class BlochAxisModel(BaseModel):
    theta: float
    phi: float = 0.0

    @classmethod
    def from_domain(cls, axis: BlochAxis) -> "BlochAxisModel":
        return cls(theta=axis.theta, phi=axis.phi)

    def to_domain(self) -> BlochAxis:
        return BlochAxis.normalized(self.theta, self.phi)


class AxesModel(BaseModel):
    """``axes[party][setting]``: angles in radians or a named axis such as ``"x"`` or ``"-y"``."""

    axes: List[List[Union[BlochAxisModel, str]]]

    @classmethod
    def from_domain(cls, choice: AxisChoice) -> "AxesModel":
        return cls(axes=[[BlochAxisModel.from_domain(a) for a in row] for row in choice.axes])

    def to_domain(self) -> AxisChoice:
        rows = []
        for row in self.axes:
            parsed = []
            for entry in row:
                if isinstance(entry, str):
                    if entry not in NAMED_AXES:
                        raise InvalidStateError(f"unknown axis name {entry!r}")
                    parsed.append(NAMED_AXES[entry])
                else:
                    parsed.append(entry.to_domain())
            rows.append(tuple(parsed))
        return AxisChoice(tuple(rows))


class PureStateModel(BaseModel):
    amplitudes: List[Tuple[float, float]]

    @classmethod
    def from_domain(cls, state: PureState) -> "PureStateModel":
        return cls(amplitudes=[(value.real, value.imag) for value in state.amplitudes])

    def to_domain(self) -> PureState:
        return PureState(tuple(complex(re, im) for re, im in self.amplitudes))


class ViolationReportModel(BaseModel):
    form: str
    best_value: float
    violated: bool
    best_axes: AxesModel
    grid_steps: int
    grid_points: int
    strategy: str
    refined: bool
    converged: bool

    @classmethod
    def from_domain(cls, report: ViolationReport) -> "ViolationReportModel":
        return cls(
            form=report.form.name or report.form.describe(),
            best_value=report.best_value,
            violated=report.violated,
            best_axes=AxesModel.from_domain(report.best_axes),
            grid_steps=report.grid_steps,
            grid_points=report.grid_points,
            strategy=report.strategy,
            refined=report.refined,
            converged=report.converged,
        )


class HardyScanModel(BaseModel):
    probability: float
    coefficients: Tuple[float, float, float]
    state: PureStateModel
    axes: AxesModel
    zero_residual: float
    form_value: float
    grid_steps: int

    @classmethod
    def from_domain(cls, report: HardyScanReport) -> "HardyScanModel":
        return cls(
            probability=report.probability,
            coefficients=report.coefficients,
            state=PureStateModel.from_domain(report.state),
            axes=AxesModel.from_domain(report.axes),
            zero_residual=report.zero_residual,
            form_value=report.form_value,
            grid_steps=report.grid_steps,
        )


class GhzReportModel(BaseModel):
    correlations: Dict[str, float]
    lhs: float
    bound: float
    violated: bool
    form_value: float
    classical_corollary_holds: bool

    @classmethod
    def from_domain(cls, report: GhzReport) -> "GhzReportModel":
        return cls(
            correlations=dict(report.correlations),
            lhs=report.lhs,
            bound=report.bound,
            violated=report.violated,
            form_value=report.form_value,
            classical_corollary_holds=report.corollary.holds,
        )


class RunReportModel(BaseModel):
    """Stable record of one CLI run."""

    command: str
    inputs_digest: str
    results: Any
    timings: Dict[str, float] = Field(default_factory=dict)
    version: str


__all__ = [
    "AxesModel",
    "BlochAxisModel",
    "CellCoefficientModel",
    "CertificateModel",
    "DeductionModel",
    "DeductionRequest",
    "GhzReportModel",
    "HardyScanModel",
    "LinearFormModel",
    "MarginalSetModel",
    "MarginalTableModel",
    "MembershipResultModel",
    "NumberValue",
    "PureStateModel",
    "RationalModel",
    "RunReportModel",
    "ScenarioModel",
    "TermModel",
    "UnderlyingDistModel",
    "ViolationReportModel",
    "WeightEntry",
    "number_from_wire",
    "number_to_wire",
    "outcome_key",
    "parse_outcome_key",
]
