import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marginal_bell.core import (
    TWO_BY_TWO,
    InvalidStateError,
    MarginalBellConfig,
    UnsupportedFormError,
    set_config,
)
from marginal_bell.inequality import (
    LinearForm,
    catalog_hardy,
    chsh_catalog,
    evaluate,
    n_party_hardy,
    term,
)
from marginal_bell.quantum import (
    AxisChoice,
    PureState,
    ScanProfile,
    algebraic_minimum,
    basis_state,
    born_marginals,
    candidate_axes,
    ghz,
    ghz_check,
    hardy_probability,
    hardy_scan,
    planar_axis,
    refine_axes,
    singlet,
    violation_scan,
)

CHSH_MINIMUM = 2 - 2 * math.sqrt(2)
HARDY_MAXIMUM = (5 * math.sqrt(5) - 11) / 2


def test_candidate_axes_count_poles_once() -> None:
    assert len(candidate_axes(ScanProfile(grid_steps=4))) == 2 + 3 * 4
    assert len(candidate_axes(ScanProfile(grid_steps=4, full_sphere=True, phi_steps=8))) == 2 + 3 * 8


def test_algebraic_minimum() -> None:
    assert algebraic_minimum(n_party_hardy(2)) == -1
    assert algebraic_minimum(chsh_catalog()[0]) == -6


def test_chsh_scan_finds_quantum_minimum_on_coarse_grid() -> None:
    report = violation_scan(chsh_catalog()[0], singlet(), grid_steps=4, refine=False)

    assert report.strategy == "exhaustive"
    assert report.grid_points == 14**4
    assert report.best_value == pytest.approx(CHSH_MINIMUM, abs=1e-9)
    assert report.violated


def test_refinement_keeps_grid_optimum() -> None:
    report = violation_scan(chsh_catalog()[0], singlet(), grid_steps=4)

    assert report.refined
    assert report.converged
    assert report.best_value == pytest.approx(CHSH_MINIMUM, abs=1e-6)
    ms = born_marginals(singlet(), report.best_axes)
    assert float(evaluate(chsh_catalog()[0], ms)) == pytest.approx(report.best_value, abs=1e-12)


def test_closed_form_axes_reach_the_minimum() -> None:
    axes = AxisChoice(
        (
            (planar_axis(0.0), planar_axis(math.pi / 2)),
            (planar_axis(math.pi / 4), planar_axis(3 * math.pi / 4)),
        )
    )
    ms = born_marginals(singlet(), axes)

    lowest = min(float(evaluate(form, ms)) for form in chsh_catalog())

    assert lowest == pytest.approx(CHSH_MINIMUM, abs=1e-12)


def test_product_state_never_violates() -> None:
    report = violation_scan(chsh_catalog()[0], basis_state([0, 0]), grid_steps=4, refine=False)

    assert not report.violated
    assert report.best_value >= -1e-9


def test_small_grid_limit_falls_back_to_sweeps() -> None:
    config = MarginalBellConfig()
    config.scan.max_grid_points = 1000
    set_config(config)

    report = violation_scan(chsh_catalog()[0], singlet(), grid_steps=4, refine=False)

    assert report.strategy == "sweep"
    assert report.best_value >= CHSH_MINIMUM - 1e-9


def test_scan_rejects_mismatched_state() -> None:
    with pytest.raises(InvalidStateError):
        violation_scan(chsh_catalog()[0], ghz(3), grid_steps=4)


def test_scan_rejects_tiny_grid() -> None:
    with pytest.raises(ValueError):
        violation_scan(chsh_catalog()[0], singlet(), grid_steps=1)


def test_refine_axes_descends_from_a_nearby_start() -> None:
    form = chsh_catalog()[0]
    start = AxisChoice(
        (
            (planar_axis(0.1), planar_axis(math.pi / 2 + 0.1)),
            (planar_axis(math.pi / 4 - 0.1), planar_axis(3 * math.pi / 4)),
        )
    )

    def objective(axes: AxisChoice) -> float:
        return float(evaluate(form, born_marginals(singlet(), axes)))

    _, value, converged = refine_axes(objective, start, 0.1, 1e-7)

    assert converged
    assert value <= objective(start)
    assert value == pytest.approx(CHSH_MINIMUM, abs=1e-5)


def test_hardy_probability_formula() -> None:
    x = np.array([1.0])
    value = hardy_probability(x, x, x)

    assert float(value[0]) == pytest.approx(1 / 4)


def test_hardy_scan_reaches_maximum_with_exact_zeros() -> None:
    report = hardy_scan(200)

    assert report.probability == pytest.approx(HARDY_MAXIMUM, abs=1e-3)
    assert report.zero_residual < 1e-9
    assert report.form_value == pytest.approx(-report.probability, abs=1e-9)
    assert report.grid_steps == 200


def test_hardy_scan_rejects_tiny_grid() -> None:
    with pytest.raises(ValueError):
        hardy_scan(1)


def test_ghz_check_breaks_the_three_party_bound() -> None:
    report = ghz_check()
    correlations = dict(report.correlations)

    assert correlations["C_001"] == pytest.approx(1.0)
    assert correlations["C_010"] == pytest.approx(1.0)
    assert correlations["C_100"] == pytest.approx(1.0)
    assert correlations["C_111"] == pytest.approx(-1.0)
    assert report.lhs == pytest.approx(-4.0)
    assert report.form_value == pytest.approx(-2.0)
    assert report.violated
    assert report.corollary.holds


def test_hardy_form_value_matches_known_maximum() -> None:
    report = hardy_scan(400)

    assert report.probability == pytest.approx(HARDY_MAXIMUM, abs=1e-3)
    assert report.form_value == pytest.approx(-HARDY_MAXIMUM, abs=1e-3)
    ms = born_marginals(report.state, report.axes)
    assert float(evaluate(n_party_hardy(2), ms)) == pytest.approx(-HARDY_MAXIMUM, abs=1e-3)


def test_scan_rejects_forms_without_a_local_proof() -> None:
    refuted = LinearForm.build(TWO_BY_TWO, (term((0, 0), (0, 0)), term((1, 1), (0, 0), -1)))

    with pytest.raises(UnsupportedFormError, match="not a local inequality"):
        violation_scan(refuted, singlet(), grid_steps=4)
    with pytest.raises(ValueError):
        violation_scan(refuted, singlet(), grid_steps=4)


scan_forms = st.sampled_from(chsh_catalog() + (n_party_hardy(2),) + catalog_hardy()[:4])
components = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
two_qubit_vectors = st.lists(st.tuples(components, components), min_size=4, max_size=4).filter(
    lambda pairs: sum(re * re + im * im for re, im in pairs) > 1e-3
)


@settings(max_examples=15, deadline=None)
@given(scan_forms, two_qubit_vectors, st.integers(2, 3), st.booleans())
def test_scan_never_goes_below_algebraic_minimum(
    form: LinearForm, pairs: list[tuple[float, float]], steps: int, refine: bool
) -> None:
    state = PureState.from_vector([complex(re, im) for re, im in pairs], normalize=True)

    report = violation_scan(form, state, grid_steps=steps, refine=refine)

    assert report.best_value >= float(algebraic_minimum(form)) - 1e-12
