import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marginal_bell.core import ArithmeticMode, InvalidStateError, check_factorization
from marginal_bell.inequality import bell_corollary_check
from marginal_bell.quantum import (
    NAMED_AXES,
    X_AXIS,
    Z_AXIS,
    AxisChoice,
    BlochAxis,
    PureState,
    basis_state,
    born_marginals,
    ghz,
    hardy_state,
    outcome_probabilities,
    planar_axis,
    product_state,
    single_party_probabilities,
    singlet,
)


def _planar_pair(alice: float, bob: float) -> AxisChoice:
    return AxisChoice(((planar_axis(alice),), (planar_axis(bob),)))


def test_singlet_same_outcome_probability_depends_on_angle() -> None:
    for alice, bob in ((0.0, 0.0), (0.0, math.pi / 2), (math.pi / 3, -math.pi / 3), (0.3, 2.1)):
        ms = born_marginals(singlet(), _planar_pair(alice, bob))
        expected = 0.5 * math.sin((alice - bob) / 2) ** 2
        assert ms.prob((0, 0), (0, 0)) == pytest.approx(expected, abs=1e-12)
        assert ms.prob((0, 0), (1, 1)) == pytest.approx(expected, abs=1e-12)


def test_born_marginals_are_float_and_normalized() -> None:
    axes = AxisChoice(((X_AXIS, Z_AXIS), (Z_AXIS, X_AXIS), (X_AXIS, X_AXIS)))
    ms = born_marginals(ghz(3), axes)

    assert ms.mode is ArithmeticMode.FLOAT
    for table in ms.tables:
        assert sum(table.probs) == pytest.approx(1.0)


def test_ghz_on_z_axes_is_perfectly_correlated() -> None:
    probs = outcome_probabilities(ghz(3), [Z_AXIS] * 3)

    assert probs[0] == pytest.approx(0.5)
    assert probs[7] == pytest.approx(0.5)
    assert list(probs[1:7]) == pytest.approx([0.0] * 6)


def test_basis_state_outcomes_are_deterministic() -> None:
    ms = born_marginals(basis_state([0, 1]), AxisChoice(((Z_AXIS,), (Z_AXIS,))))

    assert ms.prob((0, 0), (0, 1)) == pytest.approx(1.0)


def test_product_state_single_party_probabilities() -> None:
    state = product_state([[1, 0], [1, 1]])

    assert single_party_probabilities(state, 0, Z_AXIS) == pytest.approx((1.0, 0.0))
    assert single_party_probabilities(state, 1, X_AXIS) == pytest.approx((1.0, 0.0))
    assert single_party_probabilities(singlet(), 1, X_AXIS) == pytest.approx((0.5, 0.5))


def test_pure_state_validation() -> None:
    with pytest.raises(InvalidStateError):
        PureState((1, 1, 0, 0))
    with pytest.raises(InvalidStateError):
        PureState((1, 0, 0))
    with pytest.raises(InvalidStateError):
        PureState.from_vector([0, 0], normalize=True)
    assert PureState.from_vector([1, 1], normalize=True).parties == 1


def test_hardy_state_has_no_double_one_component() -> None:
    state = hardy_state(1.0, 1.0, 1.0)

    assert state.amplitudes[3] == 0
    assert abs(state.amplitudes[0]) == pytest.approx(1 / math.sqrt(3))


def test_bloch_axis_ranges() -> None:
    with pytest.raises(InvalidStateError):
        BlochAxis(4.0)
    assert BlochAxis(1.0, -math.pi / 2).phi == pytest.approx(3 * math.pi / 2)


def test_normalized_axis_keeps_direction() -> None:
    axis = BlochAxis.normalized(-math.pi / 3, 0.0)

    assert axis.theta == pytest.approx(math.pi / 3)
    assert list(axis.vector()) == pytest.approx([-math.sin(math.pi / 3), 0.0, 0.5])
    assert planar_axis(-math.pi / 3) == axis


def test_eigenvectors_match_projectors() -> None:
    axis = BlochAxis(0.7, 1.9)
    for outcome, vector in enumerate(axis.eigenvectors()):
        projected = axis.projector(outcome) @ vector
        assert np.allclose(projected, vector)


def test_axis_choice_from_names() -> None:
    axes = AxisChoice.from_names([["x", "y"], ["-z", "z"]])

    assert axes.parties == 2
    assert axes.settings == 2
    assert axes.axis(1, 0) == NAMED_AXES["-z"]
    assert len(axes.flat()) == 4


def test_axis_choice_from_angles() -> None:
    axes = AxisChoice.from_angles([[(0.0, 0.0), (math.pi / 2, 0.0)]])

    assert axes.parties == 1
    assert axes.axis(0, 0) == Z_AXIS
    assert axes.axis(0, 1) == X_AXIS


def test_axis_choice_rejects_unknown_and_ragged_input() -> None:
    with pytest.raises(InvalidStateError):
        AxisChoice.from_names([["x", "w"]])
    with pytest.raises(InvalidStateError):
        AxisChoice(((X_AXIS, Z_AXIS), (X_AXIS,)))


def test_born_marginals_require_matching_party_count() -> None:
    with pytest.raises(InvalidStateError):
        born_marginals(ghz(3), _planar_pair(0.0, 0.0))


def test_singlet_violates_conditional_three_axis_inequality() -> None:
    axes = AxisChoice(
        (
            (planar_axis(0.0), planar_axis(math.pi / 3), planar_axis(math.pi / 2)),
            (planar_axis(0.0), planar_axis(math.pi / 2), planar_axis(-math.pi / 3)),
        )
    )

    report = bell_corollary_check(born_marginals(singlet(), axes))

    assert report.premise_holds
    assert float(report.value) == pytest.approx(-1 / 8)
    assert report.violated


components = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
two_qubit_vectors = st.lists(
    st.tuples(components, components), min_size=4, max_size=4
).filter(lambda pairs: sum(re * re + im * im for re, im in pairs) > 1e-3)
axes_angles = st.tuples(
    st.floats(min_value=0.0, max_value=math.pi), st.floats(min_value=0.0, max_value=2 * math.pi)
)


def _state_from_pairs(pairs: list[tuple[float, float]]) -> PureState:
    return PureState.from_vector([complex(re, im) for re, im in pairs], normalize=True)


def _random_state(rng: np.random.Generator, parties: int) -> PureState:
    size = 2**parties
    return PureState.from_vector(
        rng.normal(size=size) + 1j * rng.normal(size=size), normalize=True
    )


def _random_axes(rng: np.random.Generator, parties: int, settings_count: int) -> AxisChoice:
    return AxisChoice.from_angles(
        [
            [(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)) for _ in range(settings_count)]
            for _ in range(parties)
        ]
    )


@settings(max_examples=50, deadline=None)
@given(two_qubit_vectors, st.lists(axes_angles, min_size=4, max_size=4))
def test_born_marginals_are_no_signaling(
    pairs: list[tuple[float, float]], angles: list[tuple[float, float]]
) -> None:
    axes = AxisChoice.from_angles([angles[:2], angles[2:]])
    ms = born_marginals(_state_from_pairs(pairs), axes)

    for table in ms.tables:
        assert sum(table.probs) == pytest.approx(1.0, abs=1e-9)
    for a in (0, 1):
        for outcome in (0, 1):
            alice = [sum(ms.prob((a, b), (outcome, B)) for B in (0, 1)) for b in (0, 1)]
            assert alice[0] == pytest.approx(alice[1], abs=1e-9)
    for b in (0, 1):
        for outcome in (0, 1):
            bob = [sum(ms.prob((a, b), (A, outcome)) for A in (0, 1)) for a in (0, 1)]
            assert bob[0] == pytest.approx(bob[1], abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_product_state_marginals_factorize(seed: int) -> None:
    rng = np.random.default_rng(seed)
    qubits = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(2)]
    ms = born_marginals(product_state(qubits), _random_axes(rng, 2, 2))

    report = check_factorization(ms, 1e-9)

    assert report.holds
    assert report.instances_checked > 0


def test_single_party_probabilities_match_born_marginals_on_random_states() -> None:
    rng = np.random.default_rng(20)
    for _ in range(20):
        parties = int(rng.integers(2, 4))
        state = _random_state(rng, parties)
        axes = _random_axes(rng, parties, 2)
        ms = born_marginals(state, axes)
        for party in range(parties):
            for setting in (0, 1):
                vector = tuple(setting if p == party else 0 for p in range(parties))
                summed = [
                    sum(
                        ms.prob(vector, outcomes)
                        for outcomes in itertools.product((0, 1), repeat=parties)
                        if outcomes[party] == bit
                    )
                    for bit in (0, 1)
                ]
                reduced = single_party_probabilities(state, party, axes.axis(party, setting))
                assert reduced == pytest.approx(tuple(summed), abs=1e-10)


def test_singlet_at_chsh_angles_breaks_factorization() -> None:
    axes = AxisChoice(
        (
            (planar_axis(0.0), planar_axis(math.pi / 2)),
            (planar_axis(math.pi / 4), planar_axis(3 * math.pi / 4)),
        )
    )

    report = check_factorization(born_marginals(singlet(), axes))

    assert not report.holds
    assert report.max_residual > 1e-3


def test_ghz_on_x_axes_has_even_parity_only() -> None:
    probs = outcome_probabilities(ghz(3), [X_AXIS] * 3)

    for index, outcomes in enumerate(itertools.product((0, 1), repeat=3)):
        expected = 0.25 if sum(outcomes) % 2 == 0 else 0.0
        assert probs[index] == pytest.approx(expected, abs=1e-12)
