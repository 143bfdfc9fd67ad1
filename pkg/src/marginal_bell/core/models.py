"""Core domain models for measurement scenarios."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Tuple, Union

from .errors import InvalidDistributionError, InvalidIndexError, InvalidScenarioError

# Outcome bits A_{p,k}, stored at position k * parties + p.
OutcomeAssignment = Tuple[int, ...]
# One coordinate per setting index k: coords[k] = sum_p A_{p,k} * 2**p.
GridIndex = Tuple[int, ...]
# One setting per party.
SettingVector = Tuple[int, ...]
# One outcome bit per party.
Outcomes = Tuple[int, ...]

Number = Union[Fraction, float]

FLOAT_TOLERANCE = 1e-9


class ArithmeticMode(str, Enum):
    """How probabilities are represented."""

    RATIONAL = "rational"
    FLOAT = "float"


def zero(mode: ArithmeticMode) -> Number:
    """Return the additive identity for ``mode``."""

    return Fraction(0) if mode is ArithmeticMode.RATIONAL else 0.0


def coerce(value: object, mode: ArithmeticMode) -> Number:
    """Convert ``value`` to the number type of ``mode``.

    Rational mode refuses floats so exact and approximate data never mix.
    """

    if mode is ArithmeticMode.RATIONAL:
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise InvalidDistributionError(
                f"rational mode requires int or Fraction values, got {value!r}"
            )
        return Fraction(value)
    if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        raise InvalidDistributionError(f"expected a number, got {value!r}")
    return float(value)


@dataclass(frozen=True, slots=True)
class Scenario:
    """A Bell scenario: ``parties`` observers with ``settings`` axes each, binary outcomes."""

    parties: int
    settings: int

    OUTCOMES = 2

    def __post_init__(self) -> None:
        for name in ("parties", "settings"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidScenarioError(f"{name} must be a positive integer, got {value!r}")

    @classmethod
    def from_setting_counts(cls, counts: Sequence[int]) -> "Scenario":
        """Build a scenario from per-party setting counts, which must agree."""

        if not counts:
            raise InvalidScenarioError("at least one party is required")
        if len(set(counts)) != 1:
            raise InvalidScenarioError(
                f"heterogeneous setting counts are not supported: {list(counts)}"
            )
        return cls(parties=len(counts), settings=counts[0])

    @property
    def bit_count(self) -> int:
        return self.parties * self.settings

    @property
    def axis_size(self) -> int:
        """Range of each grid coordinate."""

        return 2**self.parties

    @property
    def cell_count(self) -> int:
        return 2**self.bit_count

    @property
    def support_size(self) -> int:
        """Number of cells summed by a single marginal probability."""

        return 2 ** (self.parties * (self.settings - 1))

    def bit_position(self, party: int, setting: int) -> int:
        """Position of A_{party,setting} in an assignment and in a flat cell index."""

        return setting * self.parties + party

    def setting_vectors(self) -> Tuple[SettingVector, ...]:
        """All setting vectors, party 0 varying slowest."""

        return tuple(itertools.product(range(self.settings), repeat=self.parties))

    def outcome_tuples(self) -> Tuple[Outcomes, ...]:
        """All outcome tuples, party 0 varying slowest."""

        return tuple(itertools.product((0, 1), repeat=self.parties))

    def outcome_index(self, outcomes: Outcomes) -> int:
        """Position of ``outcomes`` within :meth:`outcome_tuples`."""

        index = 0
        for bit in outcomes:
            index = (index << 1) | bit
        return index

    def setting_index(self, settings: SettingVector) -> int:
        """Position of ``settings`` within :meth:`setting_vectors`."""

        index = 0
        for value in settings:
            index = index * self.settings + value
        return index

    def validate_settings(self, settings: Sequence[int]) -> SettingVector:
        vector = tuple(settings)
        if len(vector) != self.parties:
            raise InvalidIndexError(
                f"setting vector needs {self.parties} entries, got {len(vector)}"
            )
        for value in vector:
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < self.settings:
                raise InvalidIndexError(f"setting {value!r} outside [0, {self.settings})")
        return vector

    def validate_outcomes(self, outcomes: Sequence[int]) -> Outcomes:
        bits = tuple(outcomes)
        if len(bits) != self.parties:
            raise InvalidIndexError(f"outcomes need {self.parties} entries, got {len(bits)}")
        for value in bits:
            if isinstance(value, bool) or not isinstance(value, int) or value not in (0, 1):
                raise InvalidIndexError(f"outcome {value!r} is not a bit")
        return bits

    def label(self, settings: SettingVector) -> str:
        """Subscript label such as ``10`` for P_10."""

        return "".join(str(value) for value in settings)

    def to_dict(self) -> dict[str, int]:
        return {"parties": self.parties, "settings": self.settings}


__all__ = [
    "ArithmeticMode",
    "FLOAT_TOLERANCE",
    "GridIndex",
    "Number",
    "OutcomeAssignment",
    "Outcomes",
    "Scenario",
    "SettingVector",
    "coerce",
    "zero",
]
