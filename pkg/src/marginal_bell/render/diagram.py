"""Grid diagrams: marginal supports drawn as lines and ribbons on the cell grid.

Cells are placed by their grid coordinates: ``coords[0]`` picks the row,
``coords[1]`` the column, and any further coordinates pick the panel (for
three settings, one panel per value of ``coords[2]``).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, List, Tuple

from marginal_bell.core import (
    GridIndex,
    InvalidIndexError,
    Scenario,
    UnsupportedFormError,
    iter_cells,
    marginal_support,
)
from marginal_bell.inequality import LinearForm, MarginalTerm


class LayerStyle(str, Enum):
    LINE = "line"
    RIBBON = "ribbon"
    DASHED_TARGET = "dashed-target"


@dataclass(frozen=True, slots=True)
class Layer:
    label: str
    cells: FrozenSet[GridIndex]
    style: LayerStyle
    color: int


@dataclass(frozen=True, slots=True)
class CellPosition:
    panel: int
    row: int
    column: int


@dataclass(frozen=True, slots=True)
class GridDiagram:
    scenario: Scenario
    layers: Tuple[Layer, ...] = ()
    title: str = ""

    def __post_init__(self) -> None:
        size = self.scenario.axis_size
        for layer in self.layers:
            for cell in layer.cells:
                if len(cell) != self.scenario.settings or not all(0 <= c < size for c in cell):
                    raise InvalidIndexError(f"layer {layer.label!r} holds invalid cell {cell}")

    @property
    def rows(self) -> int:
        return self.scenario.axis_size

    @property
    def columns(self) -> int:
        return self.scenario.axis_size if self.scenario.settings > 1 else 1

    @property
    def panels(self) -> int:
        return self.scenario.axis_size ** max(self.scenario.settings - 2, 0)

    def position(self, cell: GridIndex) -> CellPosition:
        size = self.scenario.axis_size
        panel = 0
        for coord in reversed(cell[2:]):
            panel = panel * size + coord
        column = cell[1] if len(cell) > 1 else 0
        return CellPosition(panel=panel, row=cell[0], column=column)

    def layers_at(self, cell: GridIndex) -> Tuple[int, ...]:
        return tuple(index for index, layer in enumerate(self.layers) if cell in layer.cells)


def is_slice(scenario: Scenario, cells: Iterable[GridIndex]) -> bool:
    """True when ``cells`` is exactly ``{c : c[k] = v}`` for some axis ``k`` and value ``v``."""

    chosen = frozenset(cells)
    if len(chosen) != scenario.axis_size ** (scenario.settings - 1):
        return False
    for axis in range(scenario.settings):
        values = {cell[axis] for cell in chosen}
        if len(values) == 1:
            value = next(iter(values))
            if chosen == frozenset(c for c in iter_cells(scenario) if c[axis] == value):
                return True
    return False


def _term_layer(scenario: Scenario, item: MarginalTerm, color: int, target: bool) -> Layer:
    cells = marginal_support(scenario, item.settings, item.outcomes)
    if target:
        style = LayerStyle.DASHED_TARGET
    else:
        style = LayerStyle.LINE if is_slice(scenario, cells) else LayerStyle.RIBBON
    return Layer(label=item.label(), cells=cells, style=style, color=color)


def diagram_of_marginal(
    scenario: Scenario, settings: Tuple[int, ...], outcomes: Tuple[int, ...]
) -> GridDiagram:
    item = MarginalTerm(
        scenario.validate_settings(settings), scenario.validate_outcomes(outcomes)
    )
    return GridDiagram(
        scenario=scenario,
        layers=(_term_layer(scenario, item, 0, target=False),),
        title=item.label(),
    )


def diagram_of_form(form: LinearForm) -> GridDiagram:
    """Positive unit terms as layers in term order, the single negative term as a dashed box."""

    if form.constant != 0:
        raise UnsupportedFormError("forms with a constant term cannot be drawn as covers")
    if any(item.coefficient != 1 for item in form.positive_terms):
        raise UnsupportedFormError("positive terms must have unit coefficients")
    negatives = form.negative_terms
    if len(negatives) > 1 or any(item.coefficient != -1 for item in negatives):
        raise UnsupportedFormError("at most one negative term with coefficient -1 is supported")

    scenario = form.scenario
    layers: List[Layer] = [
        _term_layer(scenario, item, index, target=False)
        for index, item in enumerate(form.positive_terms)
    ]
    for item in negatives:
        layers.append(_term_layer(scenario, item, len(layers), target=True))
    return GridDiagram(
        scenario=scenario,
        layers=tuple(layers),
        title=form.name or form.describe(),
    )


def marginal_family(scenario: Scenario) -> Tuple[GridDiagram, ...]:
    """One diagram per setting vector, one layer per outcome tuple."""

    diagrams = []
    for settings in scenario.setting_vectors():
        layers = tuple(
            _term_layer(scenario, MarginalTerm(settings, outcomes), index, target=False)
            for index, outcomes in enumerate(scenario.outcome_tuples())
        )
        diagrams.append(
            GridDiagram(scenario=scenario, layers=layers, title=f"P_{scenario.label(settings)}")
        )
    return tuple(diagrams)


__all__ = [
    "CellPosition",
    "GridDiagram",
    "Layer",
    "LayerStyle",
    "diagram_of_form",
    "diagram_of_marginal",
    "is_slice",
    "marginal_family",
]
