import pytest

from marginal_bell.cli.report import (
    CHSH_QUANTUM_MINIMUM,
    CRITERIA,
    HARDY_MAXIMUM,
    build_run_report,
    hardy_relabeled_forms,
    inputs_digest,
    reproduce,
    run_criterion,
)
from marginal_bell.core import MarginalBellConfig
from marginal_bell.inequality import certify


def test_constants() -> None:
    assert CHSH_QUANTUM_MINIMUM == pytest.approx(-0.8284271247)
    assert HARDY_MAXIMUM == pytest.approx(0.0901699437)
    assert len(CRITERIA) == 12


def test_relabeled_hardy_forms_are_proven() -> None:
    forms = hardy_relabeled_forms()

    assert len(forms) == 3
    assert all(certify(form).proven for form in forms)


@pytest.mark.parametrize("number", [1, 2, 3, 4, 5, 11, 12])
def test_cheap_criteria_pass(number: int) -> None:
    result = run_criterion(number, MarginalBellConfig())

    assert result.passed, result.measured
    assert result.name == CRITERIA[number - 1][0]


def test_expansion_measurement() -> None:
    result = run_criterion(1, MarginalBellConfig())

    assert result.measured == {"nonzero_cells": 11, "coefficient_at_origin": "2"}


def test_ghz_and_three_axes_criteria() -> None:
    ghz, three_axes = reproduce(MarginalBellConfig(), [6, 7])

    assert ghz.passed
    assert ghz.measured["lhs"] == pytest.approx(-4.0)
    assert three_axes.passed
    assert three_axes.measured["corollary_value"] == pytest.approx(-0.125)
    assert three_axes.measured["quantum_violation"] is True


def test_small_cross_validation_run() -> None:
    config = MarginalBellConfig()
    config.reproduce.no_signaling_samples = 20
    config.reproduce.random_rho_samples = 10

    (result,) = reproduce(config, [10])

    assert result.passed
    assert result.measured["soundness_violations"] == 0
    assert result.measured["no_signaling_samples"] == 20


def test_reproduce_rejects_unknown_numbers() -> None:
    with pytest.raises(ValueError):
        reproduce(MarginalBellConfig(), [0])
    with pytest.raises(ValueError):
        reproduce(MarginalBellConfig(), [13])


def test_inputs_digest_is_canonical() -> None:
    first = inputs_digest({"b": 1, "a": [1, 2]})
    second = inputs_digest({"a": [1, 2], "b": 1})

    assert first == second
    assert len(first) == 64
    assert inputs_digest({"a": [2, 1], "b": 1}) != first


def test_run_report_model() -> None:
    report = build_run_report("certify", {"form": "hardy-2"}, {"verdict": "proven"})

    assert report.command == "certify"
    assert report.inputs_digest == inputs_digest({"form": "hardy-2"})
    assert report.timings == {}
    assert report.version
