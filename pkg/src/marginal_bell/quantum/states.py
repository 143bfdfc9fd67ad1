"""Pure qubit states, Bloch-sphere measurement axes and Born-rule marginals.

Amplitudes are stored in Kronecker order with party 0 as the most significant
qubit, so reshaping to ``(2,) * n`` puts party ``p`` on tensor axis ``p``.
Outcome 0 is the +1 eigenvector of ``n.sigma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from marginal_bell.core import (
    ArithmeticMode,
    InvalidStateError,
    MarginalSet,
    MarginalTable,
    Scenario,
)

NORM_TOLERANCE = 1e-12
TWO_PI = 2 * math.pi

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True, slots=True)
class BlochAxis:
    """Unit vector ``(sin θ cos φ, sin θ sin φ, cos θ)``; θ in [0, π], φ in [0, 2π)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        theta = float(self.theta)
        if not -1e-12 <= theta <= math.pi + 1e-12:
            raise InvalidStateError(f"theta {theta!r} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(theta, 0.0), math.pi))
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @classmethod
    def normalized(cls, theta: float, phi: float) -> "BlochAxis":
        """Fold any (θ, φ) onto the canonical ranges without changing the direction."""

        theta = theta % TWO_PI
        if theta > math.pi:
            theta = TWO_PI - theta
            phi += math.pi
        return cls(theta, phi)

    def vector(self) -> np.ndarray:
        s = math.sin(self.theta)
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi), math.cos(self.theta)])

    def observable(self) -> np.ndarray:
        nx, ny, nz = self.vector()
        return nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z

    def projector(self, outcome: int) -> np.ndarray:
        """``(I + (-1)^outcome n.sigma) / 2``."""

        sign = -1.0 if outcome else 1.0
        return 0.5 * (IDENTITY + sign * self.observable())

    def eigenvectors(self) -> np.ndarray:
        """Row ``o`` is the eigenvector for outcome ``o``."""

        half = self.theta / 2
        phase = np.exp(1j * self.phi)
        return np.array(
            [
                [math.cos(half), phase * math.sin(half)],
                [math.sin(half), -phase * math.cos(half)],
            ],
            dtype=np.complex128,
        )

    def to_dict(self) -> dict[str, float]:
        return {"theta": self.theta, "phi": self.phi}


X_AXIS = BlochAxis(math.pi / 2, 0.0)
Y_AXIS = BlochAxis(math.pi / 2, math.pi / 2)
Z_AXIS = BlochAxis(0.0, 0.0)
MINUS_X_AXIS = BlochAxis(math.pi / 2, math.pi)
MINUS_Y_AXIS = BlochAxis(math.pi / 2, 3 * math.pi / 2)
MINUS_Z_AXIS = BlochAxis(math.pi, 0.0)

NAMED_AXES: dict[str, BlochAxis] = {
    "x": X_AXIS,
    "y": Y_AXIS,
    "z": Z_AXIS,
    "-x": MINUS_X_AXIS,
    "-y": MINUS_Y_AXIS,
    "-z": MINUS_Z_AXIS,
}


def planar_axis(angle: float) -> BlochAxis:
    """Axis at ``angle`` from +z towards +x in the x-z plane."""

    return BlochAxis.normalized(angle, 0.0)


@dataclass(frozen=True, slots=True)
class AxisChoice:
    """``axes[p][k]`` is the measurement axis of party ``p`` under setting ``k``."""

    axes: Tuple[Tuple[BlochAxis, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.axes)
        if not rows or not rows[0]:
            raise InvalidStateError("axis choice needs at least one party and one setting")
        if len({len(row) for row in rows}) != 1:
            raise InvalidStateError("every party needs the same number of settings")
        object.__setattr__(self, "axes", rows)

    @classmethod
    def from_angles(cls, angles: Iterable[Iterable[Tuple[float, float]]]) -> "AxisChoice":
        return cls(tuple(tuple(BlochAxis(theta, phi) for theta, phi in row) for row in angles))

    @classmethod
    def from_names(cls, names: Iterable[Iterable[str]]) -> "AxisChoice":
        try:
            return cls(tuple(tuple(NAMED_AXES[name] for name in row) for row in names))
        except KeyError as exc:
            raise InvalidStateError(f"unknown axis name {exc.args[0]!r}") from None

    @property
    def parties(self) -> int:
        return len(self.axes)

    @property
    def settings(self) -> int:
        return len(self.axes[0])

    @property
    def scenario(self) -> Scenario:
        return Scenario(parties=self.parties, settings=self.settings)

    def axis(self, party: int, setting: int) -> BlochAxis:
        return self.axes[party][setting]

    def replace(self, party: int, setting: int, axis: BlochAxis) -> "AxisChoice":
        rows = [list(row) for row in self.axes]
        rows[party][setting] = axis
        return AxisChoice(tuple(tuple(row) for row in rows))

    def flat(self) -> Tuple[BlochAxis, ...]:
        """Axes in party-major order, the order scans index them."""

        return tuple(axis for row in self.axes for axis in row)


@dataclass(frozen=True, slots=True)
class PureState:
    amplitudes: Tuple[complex, ...]

    def __post_init__(self) -> None:
        amplitudes = tuple(complex(value) for value in self.amplitudes)
        size = len(amplitudes)
        if size < 2 or size & (size - 1):
            raise InvalidStateError(f"state needs 2**n amplitudes with n >= 1, got {size}")
        norm = sum(abs(value) ** 2 for value in amplitudes)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidStateError(f"state is not normalized: sum |amp|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_vector(cls, vector: Sequence[complex], *, normalize: bool = False) -> "PureState":
        array = np.asarray(vector, dtype=np.complex128)
        if normalize:
            norm = float(np.linalg.norm(array))
            if norm == 0.0:
                raise InvalidStateError("cannot normalize the zero vector")
            array = array / norm
        return cls(tuple(complex(value) for value in array))

    @property
    def parties(self) -> int:
        return len(self.amplitudes).bit_length() - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=np.complex128)

    def tensor(self) -> np.ndarray:
        return self.as_array().reshape((2,) * self.parties)


def singlet() -> PureState:
    """(|01> - |10>) / sqrt 2."""

    r = 1 / math.sqrt(2)
    return PureState((0, r, -r, 0))


def ghz(n: int = 3) -> PureState:
    """(|0...0> + |1...1>) / sqrt 2."""

    if n < 2:
        raise InvalidStateError(f"GHZ state needs at least two qubits, got {n}")
    amplitudes = [0.0] * (2**n)
    amplitudes[0] = amplitudes[-1] = 1 / math.sqrt(2)
    return PureState(tuple(amplitudes))


def basis_state(bits: Sequence[int]) -> PureState:
    """Computational basis product state ``|b_0 b_1 ...>``."""

    index = 0
    for bit in bits:
        index = (index << 1) | int(bit)
    amplitudes = [0.0] * (2 ** len(bits))
    amplitudes[index] = 1.0
    return PureState(tuple(amplitudes))


def product_state(qubits: Sequence[Sequence[complex]]) -> PureState:
    """Kronecker product of single-qubit vectors, each normalized first."""

    vector = np.array([1.0], dtype=np.complex128)
    for qubit in qubits:
        single = np.asarray(qubit, dtype=np.complex128)
        vector = np.kron(vector, single / np.linalg.norm(single))
    return PureState.from_vector(vector)


def hardy_state(x: float, y: float, z: float) -> PureState:
    """``x|00> + y|01> + z|10>`` normalized; the |11> component is absent."""

    return PureState.from_vector((x, y, z, 0.0), normalize=True)


NAMED_STATES = {
    "singlet": singlet,
    "ghz": ghz,
}


def _check_shapes(state: PureState, axes: AxisChoice) -> Scenario:
    if state.parties != axes.parties:
        raise InvalidStateError(
            f"state has {state.parties} qubits but axes cover {axes.parties} parties"
        )
    return axes.scenario


def outcome_probabilities(state: PureState, axes: Sequence[BlochAxis]) -> np.ndarray:
    """P(o) for one axis per party, flattened with party 0 most significant."""

    psi = state.tensor()
    for party, axis in enumerate(axes):
        rotated = np.tensordot(axis.eigenvectors().conj(), psi, axes=([1], [party]))
        psi = np.moveaxis(rotated, 0, party)
    return np.abs(psi.reshape(-1)) ** 2


def born_marginals(state: PureState, axes: AxisChoice) -> MarginalSet:
    """P_s(o) = <psi| prod_p Pi_{o_p}(axis_{p, s_p}) |psi> for every setting vector."""

    scenario = _check_shapes(state, axes)
    tables = []
    for settings in scenario.setting_vectors():
        chosen = [axes.axis(party, setting) for party, setting in enumerate(settings)]
        probs = outcome_probabilities(state, chosen)
        tables.append(
            MarginalTable(
                scenario=scenario,
                settings=settings,
                probs=tuple(float(value) for value in probs / probs.sum()),
                mode=ArithmeticMode.FLOAT,
            )
        )
    return MarginalSet(scenario=scenario, tables=tuple(tables), mode=ArithmeticMode.FLOAT)


def single_party_probabilities(state: PureState, party: int, axis: BlochAxis) -> Tuple[float, float]:
    """Outcome probabilities from the reduced single-qubit density matrix."""

    psi = state.tensor()
    moved = np.moveaxis(psi, party, 0).reshape(2, -1)
    reduced = moved @ moved.conj().T
    return tuple(  # type: ignore[return-value]
        float(np.real(np.trace(reduced @ axis.projector(outcome)))) for outcome in (0, 1)
    )


__all__ = [
    "AxisChoice",
    "BlochAxis",
    "MINUS_X_AXIS",
    "MINUS_Y_AXIS",
    "MINUS_Z_AXIS",
    "NAMED_AXES",
    "NAMED_STATES",
    "PureState",
    "X_AXIS",
    "Y_AXIS",
    "Z_AXIS",
    "basis_state",
    "born_marginals",
    "ghz",
    "hardy_state",
    "outcome_probabilities",
    "planar_axis",
    "product_state",
    "single_party_probabilities",
    "singlet",
]
