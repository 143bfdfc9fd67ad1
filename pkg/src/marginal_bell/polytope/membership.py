"""Local-model membership: does some ρ >= 0 reproduce a marginal set?"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from marginal_bell.core import (
    TWO_BY_TWO,
    ArithmeticMode,
    FactorizationReport,
    MarginalSet,
    MarginalTable,
    Number,
    Outcomes,
    Scenario,
    SettingVector,
    SolverLimitError,
    UnderlyingDist,
    check_factorization,
    get_config,
    marginalize_all,
    support_indices,
)
from marginal_bell.inequality import (
    LinearForm,
    catalog_hardy,
    chsh_catalog,
    evaluate,
    n_party_hardy,
    three_axes_form,
    zukowski_form,
)
from marginal_bell.inequality.catalog import THREE_AXES, THREE_PARTY

from .simplex import LPStatus, solve_lp

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class FeasibilityProblem:
    """``A ρ = b``: one row per (settings, outcomes) pair, then the normalization row."""

    scenario: Scenario
    target: MarginalSet
    matrix: np.ndarray
    rhs: Tuple[Number, ...]
    row_keys: Tuple[Tuple[SettingVector, Outcomes], ...]

    @classmethod
    def build(cls, ms: MarginalSet) -> "FeasibilityProblem":
        scenario = ms.scenario
        keys = [
            (settings, outcomes)
            for settings in scenario.setting_vectors()
            for outcomes in scenario.outcome_tuples()
        ]
        matrix = np.zeros((len(keys) + 1, scenario.cell_count), dtype=np.int64)
        rhs: List[Number] = []
        for row, (settings, outcomes) in enumerate(keys):
            matrix[row, list(support_indices(scenario, settings, outcomes))] = 1
            rhs.append(ms.prob(settings, outcomes))
        matrix[-1, :] = 1
        rhs.append(Fraction(1) if ms.mode is ArithmeticMode.RATIONAL else 1.0)
        return cls(
            scenario=scenario, target=ms, matrix=matrix, rhs=tuple(rhs), row_keys=tuple(keys)
        )

    @property
    def variable_count(self) -> int:
        return self.scenario.cell_count


class MembershipVerdict(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True, slots=True)
class MembershipResult:
    verdict: MembershipVerdict
    witness: Optional[UnderlyingDist] = None
    residual: float = 0.0
    hint: Optional[LinearForm] = None
    hint_value: Optional[Number] = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.verdict is MembershipVerdict.FEASIBLE


def default_hint_forms(scenario: Scenario) -> Tuple[LinearForm, ...]:
    """Catalog forms worth evaluating when a marginal set is infeasible."""

    if scenario == TWO_BY_TWO:
        return chsh_catalog() + catalog_hardy()
    if scenario == THREE_PARTY:
        return (zukowski_form(), n_party_hardy(3))
    if scenario == THREE_AXES:
        return (three_axes_form(),)
    if scenario.settings == 2:
        return (n_party_hardy(scenario.parties),)
    return ()


def _max_residual(witness: UnderlyingDist, ms: MarginalSet) -> float:
    reproduced = marginalize_all(witness)
    worst = 0.0
    for mine, theirs in zip(reproduced.tables, ms.tables):
        for a, b in zip(mine.probs, theirs.probs):
            worst = max(worst, abs(float(a) - float(b)))
    return worst


def _float_witness(scenario: Scenario, x: Sequence[Number]) -> UnderlyingDist:
    clipped = [max(float(value), 0.0) for value in x]
    total = sum(clipped)
    return UnderlyingDist(
        scenario=scenario,
        weights=tuple(value / total for value in clipped),
        mode=ArithmeticMode.FLOAT,
    )


def membership(
    ms: MarginalSet,
    tol: Optional[float] = None,
    *,
    forms: Optional[Iterable[LinearForm]] = None,
) -> MembershipResult:
    """Decide whether ``ms`` has a nonnegative underlying distribution.

    Rational marginal sets are solved exactly and the witness reproduces them
    exactly. When infeasible, the first supplied (or default catalog) form
    evaluating negative is attached as a hint.
    """

    exact = ms.mode is ArithmeticMode.RATIONAL
    tolerance = get_config().polytope.feasibility_tolerance if tol is None else tol
    problem = FeasibilityProblem.build(ms)
    result = solve_lp(problem.matrix.tolist(), list(problem.rhs), exact=exact, tol=tolerance)

    if result.status is LPStatus.PIVOT_LIMIT:
        raise SolverLimitError(
            f"membership LP stopped after {result.pivots} pivots; raise polytope.max_pivots"
        )

    if result.feasible and result.x is not None:
        if exact:
            witness = UnderlyingDist(ms.scenario, result.x, ArithmeticMode.RATIONAL)
        else:
            witness = _float_witness(ms.scenario, result.x)
        residual = _max_residual(witness, ms)
        logger.debug("membership: feasible after %d pivots, residual %.3g", result.pivots, residual)
        return MembershipResult(
            verdict=MembershipVerdict.FEASIBLE,
            witness=witness,
            residual=residual,
            pivots=result.pivots,
        )

    hint: Optional[LinearForm] = None
    hint_value: Optional[Number] = None
    candidates = default_hint_forms(ms.scenario) if forms is None else tuple(forms)
    for form in candidates:
        value = evaluate(form, ms)
        if value < (0 if exact else -tolerance):
            hint, hint_value = form, value
            break
    logger.debug(
        "membership: infeasible (phase-one value %s), hint %s",
        result.phase_one_value,
        hint.name if hint else None,
    )
    return MembershipResult(
        verdict=MembershipVerdict.INFEASIBLE,
        residual=float(result.phase_one_value or 0),
        hint=hint,
        hint_value=hint_value,
        pivots=result.pivots,
    )


@dataclass(frozen=True, slots=True)
class CrossValidationReport:
    values: Tuple[Tuple[str, Number], ...]
    forms_pass: bool
    membership: MembershipResult

    @property
    def soundness_violation(self) -> bool:
        """A local model exists yet some proven form is negative; never expected."""

        return self.membership.feasible and not self.forms_pass

    @property
    def catalog_gap(self) -> bool:
        """Every supplied form passes but no local model exists."""

        return self.forms_pass and not self.membership.feasible


def cross_validate(
    ms: MarginalSet, forms: Sequence[LinearForm], tol: Optional[float] = None
) -> CrossValidationReport:
    """Compare inequality satisfaction against the membership verdict."""

    exact = ms.mode is ArithmeticMode.RATIONAL
    tolerance = get_config().polytope.feasibility_tolerance if tol is None else tol
    values = tuple((form.name or form.describe(), evaluate(form, ms)) for form in forms)
    floor = 0 if exact else -tolerance
    forms_pass = all(value >= floor for _, value in values)
    report = CrossValidationReport(
        values=values, forms_pass=forms_pass, membership=membership(ms, tol, forms=forms)
    )
    if report.soundness_violation:
        logger.error("soundness violation: feasible marginals fail a proven form")
    elif report.catalog_gap:
        logger.warning("all %d supplied forms pass but no local model exists", len(forms))
    return report


@dataclass(frozen=True, slots=True)
class SeparatingExample:
    """A feasible ρ whose marginals break statistical independence."""

    rho: UnderlyingDist
    factorization: FactorizationReport


def separating_example(scenario: Scenario = TWO_BY_TWO) -> Optional[SeparatingExample]:
    """Search equal mixtures of two point masses, in flat order, for one failing factorization."""

    half = Fraction(1, 2)
    for first, second in itertools.combinations(range(scenario.cell_count), 2):
        weights = [Fraction(0)] * scenario.cell_count
        weights[first] = half
        weights[second] = half
        rho = UnderlyingDist(scenario, tuple(weights))
        report = check_factorization(marginalize_all(rho))
        if not report.holds:
            logger.debug("separating example at cells %d and %d", first, second)
            return SeparatingExample(rho=rho, factorization=report)
    return None


def sample_no_signaling(rng: random.Random) -> MarginalSet:
    """Uniform single-site marginals, then each joint ``P_ab(0,0)`` uniform within its bounds."""

    alice = [rng.random() for _ in range(2)]
    bob = [rng.random() for _ in range(2)]
    tables = []
    for a, b in TWO_BY_TWO.setting_vectors():
        pa, pb = alice[a], bob[b]
        low, high = max(0.0, pa + pb - 1.0), min(pa, pb)
        both = low + (high - low) * rng.random()
        probs = (both, pa - both, pb - both, max(0.0, 1.0 - pa - pb + both))
        total = sum(probs)
        tables.append(
            MarginalTable(
                scenario=TWO_BY_TWO,
                settings=(a, b),
                probs=tuple(value / total for value in probs),
                mode=ArithmeticMode.FLOAT,
            )
        )
    return MarginalSet(scenario=TWO_BY_TWO, tables=tuple(tables), mode=ArithmeticMode.FLOAT)


@dataclass(frozen=True, slots=True)
class FineReport:
    samples: int
    agreements: int
    disagreements: int
    skipped: int

    @property
    def consistent(self) -> bool:
        return self.disagreements == 0


BOUNDARY_MARGIN = 1e-7


def check_fine(samples: int, rng: random.Random, tol: Optional[float] = None) -> FineReport:
    """Membership agrees with "all eight CHSH branches hold" on random no-signaling points.

    Points within ``BOUNDARY_MARGIN`` of a CHSH facet are skipped since the
    float verdicts there depend on tolerance choices.
    """

    forms = chsh_catalog()
    agreements = disagreements = skipped = 0
    for _ in range(samples):
        ms = sample_no_signaling(rng)
        lowest = min(float(evaluate(form, ms)) for form in forms)
        if abs(lowest) < BOUNDARY_MARGIN:
            skipped += 1
            continue
        verdict = membership(ms, tol, forms=forms).feasible
        if verdict == (lowest >= 0):
            agreements += 1
        else:
            disagreements += 1
            logger.warning("membership and CHSH disagree (min branch %.3g)", lowest)
    return FineReport(
        samples=samples, agreements=agreements, disagreements=disagreements, skipped=skipped
    )


__all__ = [
    "BOUNDARY_MARGIN",
    "CrossValidationReport",
    "FeasibilityProblem",
    "FineReport",
    "MembershipResult",
    "MembershipVerdict",
    "SeparatingExample",
    "check_fine",
    "cross_validate",
    "default_hint_forms",
    "membership",
    "sample_no_signaling",
    "separating_example",
]
