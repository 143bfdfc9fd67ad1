"""Run reports and the acceptance reproduction run."""
from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence, Tuple

from marginal_bell import __version__
from marginal_bell.codec import RunReportModel
from marginal_bell.core import (
    TWO_BY_TWO,
    ArithmeticMode,
    GridIndex,
    MarginalBellConfig,
    Scenario,
    embed_local,
    full_marginals,
    iter_cells,
    marginal_support,
    marginalize_all,
    random_rho,
    reduce_local,
)
from marginal_bell.inequality import (
    LinearForm,
    MarginalTerm,
    bell_corollary_check,
    catalog_hardy,
    certify,
    chsh_catalog,
    chsh_decomposition,
    evaluate,
    expand,
    hardy_deduce,
    n_party_hardy,
    term,
    three_axes_form,
    zukowski_form,
)
from marginal_bell.polytope import check_fine, cross_validate
from marginal_bell.quantum import (
    AxisChoice,
    born_marginals,
    ghz_check,
    hardy_scan,
    planar_axis,
    singlet,
    violation_scan,
)
from marginal_bell.render import LayerStyle, diagram_of_form, emit

logger = logging.getLogger(__name__)

CHSH_QUANTUM_MINIMUM = 2.0 - 2.0 * math.sqrt(2.0)
HARDY_MAXIMUM = (5.0 * math.sqrt(5.0) - 11.0) / 2.0

# Coefficients of P_10(0,0) + P_01(0,0) + P_11(1,1) on the 4x4 grid.
EXPANSION_EXPECTED: Dict[Tuple[int, int], int] = {
    (0, 0): 2,
    (0, 1): 1,
    (0, 2): 1,
    (0, 3): 1,
    (1, 0): 1,
    (1, 2): 1,
    (1, 3): 1,
    (2, 0): 1,
    (2, 1): 1,
    (2, 3): 1,
    (3, 3): 1,
}

HARDY_RELABELED: Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...] = (
    ((1, 1), (0, 0)),
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
)


def hardy_relabeled_forms() -> Tuple[LinearForm, ...]:
    """Outcome relabelings of the base Hardy form: (low outcome pair, high outcome pair)."""

    return tuple(
        LinearForm.build(
            TWO_BY_TWO,
            (
                term((1, 0), low),
                term((0, 1), low),
                term((1, 1), high),
                term((0, 0), low, -1),
            ),
        )
        for low, high in HARDY_RELABELED
    )


def inputs_digest(payload: Any) -> str:
    """sha256 over canonical JSON of the command inputs."""

    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_run_report(
    command: str, inputs: Any, results: Any, timings: Dict[str, float] | None = None
) -> RunReportModel:
    return RunReportModel(
        command=command,
        inputs_digest=inputs_digest(inputs),
        results=results,
        timings=timings or {},
        version=__version__,
    )


@dataclass(frozen=True, slots=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


Measurement = Tuple[bool, Dict[str, Any]]


def check_expansion(config: MarginalBellConfig) -> Measurement:
    form = LinearForm.build(
        TWO_BY_TWO, (term((1, 0), (0, 0)), term((0, 1), (0, 0)), term((1, 1), (1, 1)))
    )
    coefficients = {cell: value for cell, value in expand(form).items() if value != 0}
    expected = {cell: Fraction(value) for cell, value in EXPANSION_EXPECTED.items()}
    return coefficients == expected, {
        "nonzero_cells": len(coefficients),
        "coefficient_at_origin": str(coefficients.get((0, 0), 0)),
    }


def check_hardy_family(config: MarginalBellConfig) -> Measurement:
    forms = catalog_hardy()
    distinct = len({form.canonical_key() for form in forms})
    proven = sum(certify(form).proven for form in forms)
    keys = {form.canonical_key() for form in forms}
    has_base = n_party_hardy(2).canonical_key() in keys
    relabeled = sum(form.canonical_key() in keys for form in hardy_relabeled_forms())
    passed = len(forms) == 64 and distinct == 64 and proven == 64 and has_base and relabeled == 3
    return passed, {
        "forms": len(forms),
        "distinct": distinct,
        "proven": proven,
        "contains_base": has_base,
        "relabeled_present": relabeled,
    }


def check_chsh_composition(config: MarginalBellConfig) -> Measurement:
    verified = 0
    for leg in TWO_BY_TWO.setting_vectors():
        parts = chsh_decomposition(leg)
        verified += parts["upper"].verify() + parts["lower"].verify()
    return verified == 8, {"branches_verified": verified}


def _deduction_oracle(scenario: Scenario, zeros: Sequence[MarginalTerm], target: MarginalTerm) -> bool:
    """Deducible iff every cell left alive by the zeros lies outside the target support."""

    dead: set[GridIndex] = set()
    for item in zeros:
        dead |= marginal_support(scenario, item.settings, item.outcomes)
    target_cells = marginal_support(scenario, target.settings, target.outcomes)
    return all(cell not in target_cells for cell in iter_cells(scenario) if cell not in dead)


def check_hardy_deduction(config: MarginalBellConfig) -> Measurement:
    two = hardy_deduce(
        TWO_BY_TWO,
        [term((1, 0), (0, 0)), term((0, 1), (0, 0)), term((1, 1), (1, 1))],
        term((0, 0), (0, 0)),
    )
    three_party = Scenario(parties=3, settings=2)
    three = hardy_deduce(
        three_party,
        [
            term((1, 0, 0), (0, 0, 0)),
            term((0, 1, 0), (0, 0, 0)),
            term((0, 0, 1), (0, 0, 0)),
            term((1, 1, 1), (1, 1, 1)),
        ],
        term((0, 0, 0), (0, 0, 0)),
    )

    terms = [
        MarginalTerm(s, o) for s in TWO_BY_TWO.setting_vectors() for o in TWO_BY_TWO.outcome_tuples()
    ]
    instances = mismatches = 0
    for target in terms:
        for size in range(5):
            for zeros in itertools.combinations(terms, size):
                instances += 1
                if hardy_deduce(TWO_BY_TWO, zeros, target).deducible != _deduction_oracle(
                    TWO_BY_TWO, zeros, target
                ):
                    mismatches += 1
    passed = two.deducible and three.deducible and mismatches == 0
    return passed, {
        "two_party": two.deducible,
        "three_party": three.deducible,
        "instances": instances,
        "mismatches": mismatches,
    }


def check_n_party_hardy(config: MarginalBellConfig) -> Measurement:
    verdicts = {str(n): certify(n_party_hardy(n)).proven for n in range(2, 7)}
    return all(verdicts.values()), {"proven": verdicts}


def check_ghz(config: MarginalBellConfig) -> Measurement:
    proven = certify(zukowski_form()).proven
    report = ghz_check()
    correlations = dict(report.correlations)
    mixed = [correlations[key] for key in ("C_001", "C_010", "C_100")]
    passed = (
        proven
        and abs(report.lhs + 4.0) <= 1e-6
        and report.violated
        and all(abs(value - 1.0) <= 1e-9 for value in mixed)
    )
    return passed, {
        "zukowski_proven": proven,
        "lhs": report.lhs,
        "correlations": correlations,
        "corollary_holds": report.corollary.holds,
    }


def bell_corollary_axes() -> AxisChoice:
    """Shared first axis for both parties; the unused settings point along x."""

    alice = (planar_axis(0.0), planar_axis(math.pi / 3), planar_axis(math.pi / 2))
    bob = (planar_axis(0.0), planar_axis(math.pi / 2), planar_axis(-math.pi / 3))
    return AxisChoice((alice, bob))


def check_three_axes(config: MarginalBellConfig) -> Measurement:
    proven = certify(three_axes_form()).proven
    ms = born_marginals(singlet(), bell_corollary_axes())
    report = bell_corollary_check(ms, 1e-9)
    passed = proven and report.premise_holds
    return passed, {
        "three_axes_proven": proven,
        "premise_value": float(report.premise_value),
        "corollary_value": float(report.value),
        "quantum_violation": report.violated,
    }


def chsh_closed_form_axes() -> AxisChoice:
    return AxisChoice(
        (
            (planar_axis(0.0), planar_axis(math.pi / 2)),
            (planar_axis(math.pi / 4), planar_axis(3 * math.pi / 4)),
        )
    )


def check_chsh_optimum(config: MarginalBellConfig) -> Measurement:
    forms = chsh_catalog()
    report = violation_scan(forms[0], singlet())
    ms = born_marginals(singlet(), chsh_closed_form_axes())
    closed = min(float(evaluate(form, ms)) for form in forms)
    passed = (
        abs(report.best_value - CHSH_QUANTUM_MINIMUM) <= 1e-3
        and abs(closed - CHSH_QUANTUM_MINIMUM) <= 1e-9
    )
    return passed, {
        "form": report.form.name,
        "scan_value": report.best_value,
        "chsh_value": 2.0 - report.best_value,
        "closed_form_value": closed,
        "strategy": report.strategy,
    }


def check_hardy_probability(config: MarginalBellConfig) -> Measurement:
    report = hardy_scan(config.reproduce.hardy_grid_steps)
    passed = abs(report.probability - HARDY_MAXIMUM) <= 1e-3 and report.zero_residual <= 1e-9
    return passed, {
        "probability": report.probability,
        "zero_residual": report.zero_residual,
        "form_value": report.form_value,
    }


def check_cross_validation(config: MarginalBellConfig) -> Measurement:
    rng = random.Random(config.reproduce.seed)
    fine = check_fine(config.reproduce.no_signaling_samples, rng)
    forms = chsh_catalog() + catalog_hardy()
    violations = 0
    for _ in range(config.reproduce.random_rho_samples):
        ms = marginalize_all(random_rho(TWO_BY_TWO, rng, ArithmeticMode.RATIONAL, sparsity=0.5))
        if cross_validate(ms, forms).soundness_violation:
            violations += 1
    return fine.consistent and violations == 0, {
        "no_signaling_samples": fine.samples,
        "agreements": fine.agreements,
        "disagreements": fine.disagreements,
        "skipped_near_boundary": fine.skipped,
        "soundness_violations": violations,
    }


def check_round_trips(config: MarginalBellConfig) -> Measurement:
    rng = random.Random(config.reproduce.seed + 1)
    failures = 0
    for _ in range(100):
        rho = random_rho(TWO_BY_TWO, rng, ArithmeticMode.RATIONAL, sparsity=0.3)
        embedded = embed_local(rho)
        if reduce_local(embedded).rho != rho or full_marginals(embedded) != marginalize_all(rho):
            failures += 1
    return failures == 0, {"samples": 100, "failures": failures}


def check_render(config: MarginalBellConfig) -> Measurement:
    form = n_party_hardy(2)
    diagram = diagram_of_form(form)
    covered: frozenset[GridIndex] = frozenset().union(
        *(layer.cells for layer in diagram.layers if layer.style is not LayerStyle.DASHED_TARGET)
    )
    positive_only = LinearForm.build(form.scenario, form.positive_terms)
    support = frozenset(cell for cell, value in expand(positive_only).items() if value > 0)
    deterministic = all(
        emit(diagram, fmt) == emit(diagram, fmt) for fmt in ("text", "svg")
    )
    return covered == support and deterministic, {
        "covered_cells": len(covered),
        "deterministic": deterministic,
    }


CRITERIA: Tuple[Tuple[str, Callable[[MarginalBellConfig], Measurement]], ...] = (
    ("expansion fidelity", check_expansion),
    ("hardy family", check_hardy_family),
    ("chsh composition", check_chsh_composition),
    ("hardy deduction", check_hardy_deduction),
    ("n-party hardy", check_n_party_hardy),
    ("zukowski and ghz", check_ghz),
    ("three axes and bell corollary", check_three_axes),
    ("quantum chsh optimum", check_chsh_optimum),
    ("quantum hardy probability", check_hardy_probability),
    ("polytope cross-validation", check_cross_validation),
    ("local embedding round trips", check_round_trips),
    ("render fidelity", check_render),
)


def run_criterion(number: int, config: MarginalBellConfig) -> CriterionResult:
    name, check = CRITERIA[number - 1]
    start = time.perf_counter()
    passed, measured = check(config)
    elapsed = time.perf_counter() - start
    if passed:
        logger.info("criterion %d (%s) passed in %.2fs", number, name, elapsed)
    else:
        logger.warning("criterion %d (%s) FAILED: %s", number, name, measured)
    return CriterionResult(
        number=number, name=name, passed=passed, measured=measured, seconds=round(elapsed, 3)
    )


def reproduce(
    config: MarginalBellConfig, only: Sequence[int] | None = None
) -> List[CriterionResult]:
    """Run the acceptance criteria in order, or just the numbers in ``only``."""

    numbers = list(only) if only else list(range(1, len(CRITERIA) + 1))
    for number in numbers:
        if not 1 <= number <= len(CRITERIA):
            raise ValueError(f"unknown criterion {number}; expected 1..{len(CRITERIA)}")
    return [run_criterion(number, config) for number in numbers]


__all__ = [
    "CHSH_QUANTUM_MINIMUM",
    "CRITERIA",
    "CriterionResult",
    "EXPANSION_EXPECTED",
    "HARDY_MAXIMUM",
    "HARDY_RELABELED",
    "bell_corollary_axes",
    "build_run_report",
    "chsh_closed_form_axes",
    "hardy_relabeled_forms",
    "inputs_digest",
    "reproduce",
    "run_criterion",
]
