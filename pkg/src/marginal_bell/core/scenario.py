"""Mixed-radix bijections between outcome assignments, grid indices and cells.

Party ``p`` is binary digit ``p`` of every grid coordinate (Alice = bit 0,
Bob = bit 1, Chris = bit 2). The flat cell index is mixed radix over the grid
coordinates with ``coords[0]`` least significant, which makes bit
``k * parties + p`` of the flat index equal to A_{p,k}.
"""
from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Iterator, Sequence, Tuple

from .errors import InvalidAssignmentError, InvalidIndexError
from .models import GridIndex, OutcomeAssignment, Outcomes, Scenario, SettingVector


def encode_cell(scenario: Scenario, assignment: Sequence[int]) -> GridIndex:
    """Map A_{p,k} bits to grid coordinates ``coords[k] = sum_p A_{p,k} 2**p``."""

    bits = tuple(assignment)
    if len(bits) != scenario.bit_count:
        raise InvalidAssignmentError(
            f"assignment needs {scenario.bit_count} bits, got {len(bits)}"
        )
    if any(bit not in (0, 1) or isinstance(bit, bool) for bit in bits):
        raise InvalidAssignmentError(f"assignment entries must be 0 or 1: {bits}")

    n = scenario.parties
    return tuple(
        sum(bits[k * n + p] << p for p in range(n)) for k in range(scenario.settings)
    )


def decode_cell(scenario: Scenario, grid: Sequence[int]) -> OutcomeAssignment:
    """Inverse of :func:`encode_cell`."""

    coords = _validate_grid(scenario, grid)
    n = scenario.parties
    return tuple((coords[k] >> p) & 1 for k in range(scenario.settings) for p in range(n))


def cell_to_flat(scenario: Scenario, grid: Sequence[int]) -> int:
    coords = _validate_grid(scenario, grid)
    flat = 0
    for coord in reversed(coords):
        flat = flat * scenario.axis_size + coord
    return flat


def flat_to_cell(scenario: Scenario, flat: int) -> GridIndex:
    if not 0 <= flat < scenario.cell_count:
        raise InvalidIndexError(f"flat index {flat} outside [0, {scenario.cell_count})")
    size = scenario.axis_size
    coords = []
    for _ in range(scenario.settings):
        flat, coord = divmod(flat, size)
        coords.append(coord)
    return tuple(coords)


def iter_cells(scenario: Scenario) -> Iterator[GridIndex]:
    """Yield every grid index in flat order."""

    for flat in range(scenario.cell_count):
        yield flat_to_cell(scenario, flat)


def outcome_bit(scenario: Scenario, flat: int, party: int, setting: int) -> int:
    """A_{party,setting} of the cell with flat index ``flat``."""

    return (flat >> scenario.bit_position(party, setting)) & 1


def outcomes_at(scenario: Scenario, flat: int, settings: SettingVector) -> Outcomes:
    """Outcomes the deterministic cell ``flat`` produces under ``settings``."""

    return tuple(
        outcome_bit(scenario, flat, party, setting) for party, setting in enumerate(settings)
    )


@lru_cache(maxsize=4096)
def support_indices(
    scenario: Scenario, settings: SettingVector, outcomes: Outcomes
) -> Tuple[int, ...]:
    """Flat indices of the cells summed by P_settings(outcomes), ascending."""

    mask, value = _support_mask(scenario, settings, outcomes)
    return tuple(flat for flat in range(scenario.cell_count) if flat & mask == value)


@lru_cache(maxsize=4096)
def support_bitset(scenario: Scenario, settings: SettingVector, outcomes: Outcomes) -> int:
    """The support as an integer bitset over flat cell indices."""

    bitset = 0
    for flat in support_indices(scenario, settings, outcomes):
        bitset |= 1 << flat
    return bitset


def marginal_support(
    scenario: Scenario, settings: Sequence[int], outcomes: Sequence[int]
) -> FrozenSet[GridIndex]:
    """Cells λ with A_{p, s[p]} = o[p] for every party ``p``."""

    s = scenario.validate_settings(settings)
    o = scenario.validate_outcomes(outcomes)
    return frozenset(flat_to_cell(scenario, flat) for flat in support_indices(scenario, s, o))


def _support_mask(
    scenario: Scenario, settings: SettingVector, outcomes: Outcomes
) -> Tuple[int, int]:
    mask = 0
    value = 0
    for party, (setting, bit) in enumerate(zip(settings, outcomes)):
        position = scenario.bit_position(party, setting)
        mask |= 1 << position
        value |= bit << position
    return mask, value


def _validate_grid(scenario: Scenario, grid: Sequence[int]) -> GridIndex:
    coords = tuple(grid)
    if len(coords) != scenario.settings:
        raise InvalidIndexError(
            f"grid index needs {scenario.settings} coordinates, got {len(coords)}"
        )
    for coord in coords:
        if isinstance(coord, bool) or not isinstance(coord, int) or not 0 <= coord < scenario.axis_size:
            raise InvalidIndexError(f"coordinate {coord!r} outside [0, {scenario.axis_size})")
    return coords


__all__ = [
    "cell_to_flat",
    "decode_cell",
    "encode_cell",
    "flat_to_cell",
    "iter_cells",
    "marginal_support",
    "outcome_bit",
    "outcomes_at",
    "support_bitset",
    "support_indices",
]
