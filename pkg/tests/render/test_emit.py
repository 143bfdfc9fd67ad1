import re

import pytest

from marginal_bell.core import TWO_BY_TWO, MarginalBellConfig, Scenario, set_config
from marginal_bell.inequality import n_party_hardy
from marginal_bell.render import (
    LayerStyle,
    OutputFormat,
    diagram_of_form,
    diagram_of_marginal,
    emit,
    emit_family,
    emit_svg,
    emit_text,
    layer_letter,
    marginal_family,
)


def test_layer_letters() -> None:
    assert layer_letter(0, LayerStyle.LINE) == "A"
    assert layer_letter(3, LayerStyle.DASHED_TARGET) == "d"
    assert layer_letter(26, LayerStyle.RIBBON) == "A"


def test_text_output_has_title_grid_and_legend() -> None:
    text = emit_text(diagram_of_form(n_party_hardy(2)))
    lines = text.splitlines()

    assert lines[0] == "hardy-2"
    assert "┌" in text
    assert lines[-4:] == [
        "A  P_01(0,0)  ribbon",
        "B  P_10(0,0)  ribbon",
        "C  P_11(1,1)  line",
        "d  P_00(0,0)  dashed-target",
    ]
    # Origin cell sits in both ribbons and under the target.
    assert "AB.d" in text


def test_ascii_flag_and_config() -> None:
    diagram = diagram_of_marginal(TWO_BY_TWO, (0, 0), (0, 0))

    assert "┌" not in emit_text(diagram, ascii_only=True)
    assert "+-+" in emit_text(diagram, ascii_only=True)

    config = MarginalBellConfig()
    config.render.ascii = True
    set_config(config)
    assert "┌" not in emit_text(diagram)


def test_text_output_is_deterministic() -> None:
    diagram = diagram_of_form(n_party_hardy(2))

    assert emit_text(diagram) == emit_text(diagram_of_form(n_party_hardy(2)))


def test_three_axis_text_shows_panel_captions() -> None:
    text = emit_text(diagram_of_marginal(Scenario(parties=2, settings=3), (0, 0), (0, 0)))

    assert "i2=0" in text
    assert "i2=3" in text


def test_svg_document_structure() -> None:
    svg = emit_svg(diagram_of_form(n_party_hardy(2)), cell_size=10)

    assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>\n<svg ')
    assert svg.endswith("</svg>\n")
    assert 'width="60"' in svg
    assert svg.count('stroke-dasharray="6 4"') == 1
    assert "hardy-2" in svg


def test_svg_uses_configured_cell_size() -> None:
    config = MarginalBellConfig()
    config.render.cell_size = 20
    set_config(config)

    svg = emit_svg(diagram_of_marginal(TWO_BY_TWO, (1, 1), (1, 1)))

    assert 'width="120"' in svg


def test_svg_is_byte_deterministic() -> None:
    first = emit(diagram_of_form(n_party_hardy(2)), OutputFormat.SVG)
    second = emit(diagram_of_form(n_party_hardy(2)), "svg")

    assert first == second


def test_unknown_format_is_rejected() -> None:
    with pytest.raises(ValueError):
        emit(diagram_of_form(n_party_hardy(2)), "png")


def test_family_output() -> None:
    family = marginal_family(TWO_BY_TWO)

    text = emit_family(family)
    svg = emit_family(family, "svg", cell_size=12)

    assert text.count("\n\n") == 3
    for title in ("P_00", "P_01", "P_10", "P_11"):
        assert title in text
    assert svg.count("<svg ") == 1
    assert len(re.findall(r"<path ", svg)) == 16
