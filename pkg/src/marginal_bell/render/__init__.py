"""Grid diagrams of marginal supports, as monospaced text or SVG."""

from .diagram import (
    CellPosition,
    GridDiagram,
    Layer,
    LayerStyle,
    diagram_of_form,
    diagram_of_marginal,
    is_slice,
    marginal_family,
)
from .emit import OutputFormat, emit, emit_family, emit_svg, emit_text, layer_letter
from .palette import PALETTE_SIZE, ColorPaletteGenerator, LayerColor, layer_color

__all__ = [
    "CellPosition",
    "ColorPaletteGenerator",
    "GridDiagram",
    "Layer",
    "LayerColor",
    "LayerStyle",
    "OutputFormat",
    "PALETTE_SIZE",
    "diagram_of_form",
    "diagram_of_marginal",
    "emit",
    "emit_family",
    "emit_svg",
    "emit_text",
    "is_slice",
    "layer_color",
    "layer_letter",
    "marginal_family",
]
