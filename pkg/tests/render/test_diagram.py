import pytest

from marginal_bell.core import (
    TWO_BY_TWO,
    InvalidIndexError,
    Scenario,
    UnsupportedFormError,
    iter_cells,
)
from marginal_bell.inequality import LinearForm, expand, n_party_hardy, term, zukowski_form
from marginal_bell.render import (
    GridDiagram,
    Layer,
    LayerStyle,
    diagram_of_form,
    diagram_of_marginal,
    is_slice,
    marginal_family,
)

THREE_AXES = Scenario(parties=2, settings=3)


def test_hardy_diagram_layers() -> None:
    diagram = diagram_of_form(n_party_hardy(2))

    assert diagram.title == "hardy-2"
    assert [layer.label for layer in diagram.layers] == [
        "P_01(0,0)",
        "P_10(0,0)",
        "P_11(1,1)",
        "P_00(0,0)",
    ]
    assert [layer.style for layer in diagram.layers] == [
        LayerStyle.RIBBON,
        LayerStyle.RIBBON,
        LayerStyle.LINE,
        LayerStyle.DASHED_TARGET,
    ]
    assert [layer.color for layer in diagram.layers] == [0, 1, 2, 3]


def test_positive_layers_cover_positive_support() -> None:
    form = n_party_hardy(2)
    diagram = diagram_of_form(form)
    positive_only = LinearForm.build(TWO_BY_TWO, form.positive_terms)

    covered = set()
    for layer in diagram.layers:
        if layer.style is not LayerStyle.DASHED_TARGET:
            covered |= layer.cells

    assert covered == set(expand(positive_only).positive_cells())
    target = diagram.layers[-1].cells
    assert target <= covered


def test_diagram_of_form_rejects_non_cover_shapes() -> None:
    with pytest.raises(UnsupportedFormError):
        diagram_of_form(zukowski_form())
    with pytest.raises(UnsupportedFormError):
        diagram_of_form(LinearForm.build(TWO_BY_TWO, (term((0, 0), (0, 0), 2),)))
    with pytest.raises(UnsupportedFormError):
        diagram_of_form(
            LinearForm.build(TWO_BY_TWO, (term((0, 0), (0, 0), -1), term((1, 1), (0, 0), -1)))
        )


def test_single_marginal_diagram() -> None:
    diagram = diagram_of_marginal(TWO_BY_TWO, (0, 0), (0, 0))

    assert diagram.title == "P_00(0,0)"
    assert len(diagram.layers) == 1
    assert diagram.layers[0].style is LayerStyle.LINE
    assert diagram.layers[0].cells == {(0, 0), (0, 1), (0, 2), (0, 3)}


def test_marginal_family_partitions_each_diagram() -> None:
    family = marginal_family(TWO_BY_TWO)

    assert [diagram.title for diagram in family] == ["P_00", "P_01", "P_10", "P_11"]
    for diagram in family:
        assert len(diagram.layers) == 4
        for cell in iter_cells(TWO_BY_TWO):
            assert len(diagram.layers_at(cell)) == 1


def test_slices_are_lines_and_ribbons_are_not() -> None:
    assert is_slice(TWO_BY_TWO, {(0, 0), (0, 1), (0, 2), (0, 3)})
    assert is_slice(TWO_BY_TWO, {(0, 3), (1, 3), (2, 3), (3, 3)})
    assert not is_slice(TWO_BY_TWO, {(0, 0), (0, 2), (1, 0), (1, 2)})
    assert not is_slice(TWO_BY_TWO, {(0, 0)})


def test_three_axis_cells_are_placed_on_panels() -> None:
    diagram = GridDiagram(scenario=THREE_AXES)

    assert diagram.panels == 4
    position = diagram.position((1, 2, 3))
    assert (position.panel, position.row, position.column) == (3, 1, 2)


def test_three_axis_same_setting_support_is_a_plane() -> None:
    diagram = diagram_of_marginal(THREE_AXES, (2, 2), (1, 1))

    assert diagram.layers[0].style is LayerStyle.LINE
    assert {diagram.position(cell).panel for cell in diagram.layers[0].cells} == {3}


def test_layers_must_hold_valid_cells() -> None:
    with pytest.raises(InvalidIndexError):
        GridDiagram(
            scenario=TWO_BY_TWO,
            layers=(Layer(label="bad", cells=frozenset({(4, 0)}), style=LayerStyle.LINE, color=0),),
        )
