"""Text and SVG emitters for grid diagrams; output is byte-deterministic."""
from __future__ import annotations

import string
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape, quoteattr

from marginal_bell.core import GridIndex, get_config, iter_cells

from .diagram import GridDiagram, LayerStyle
from .palette import layer_color


class OutputFormat(str, Enum):
    TEXT = "text"
    SVG = "svg"


@dataclass(frozen=True, slots=True)
class _Box:
    top_left: str
    top: str
    top_joint: str
    top_right: str
    side: str
    bottom_left: str
    bottom_joint: str
    bottom_right: str


UNICODE_BOX = _Box("┌", "─", "┬", "┐", "│", "└", "┴", "┘")
ASCII_BOX = _Box("+", "-", "+", "+", "|", "+", "+", "+")


def layer_letter(index: int, style: LayerStyle) -> str:
    letter = string.ascii_uppercase[index % 26]
    return letter.lower() if style is LayerStyle.DASHED_TARGET else letter


def _cell_text(diagram: GridDiagram, cell: GridIndex) -> str:
    if not diagram.layers:
        return " "
    chars = []
    for index, layer in enumerate(diagram.layers):
        chars.append(layer_letter(index, layer.style) if cell in layer.cells else ".")
    return "".join(chars)


def _panel_lines(diagram: GridDiagram, panel: int, box: _Box) -> List[str]:
    width = max(len(diagram.layers), 1)
    grid: Dict[Tuple[int, int], str] = {}
    for cell in iter_cells(diagram.scenario):
        position = diagram.position(cell)
        if position.panel == panel:
            grid[(position.row, position.column)] = _cell_text(diagram, cell)

    label_width = len(str(diagram.rows - 1))
    pad = " " * (label_width + 1)
    header = pad + " " + " ".join(str(c).center(width) for c in range(diagram.columns)) + " "
    segments = [box.top * width for _ in range(diagram.columns)]
    lines = [header, pad + box.top_left + box.top_joint.join(segments) + box.top_right]
    for row in range(diagram.rows):
        cells = box.side.join(grid[(row, column)] for column in range(diagram.columns))
        lines.append(f"{str(row).rjust(label_width)} {box.side}{cells}{box.side}")
    lines.append(pad + box.bottom_left + box.bottom_joint.join(segments) + box.bottom_right)
    return lines


def _panel_caption(diagram: GridDiagram, panel: int) -> str:
    if diagram.scenario.settings <= 2:
        return ""
    size = diagram.scenario.axis_size
    coords = []
    for axis in range(2, diagram.scenario.settings):
        panel, value = divmod(panel, size)
        coords.append(f"i{axis}={value}")
    return " ".join(coords)


def emit_text(diagram: GridDiagram, *, ascii_only: Optional[bool] = None) -> str:
    """Panels side by side, one character per layer in every cell, then a legend."""

    use_ascii = get_config().render.ascii if ascii_only is None else ascii_only
    box = ASCII_BOX if use_ascii else UNICODE_BOX
    blocks = [_panel_lines(diagram, panel, box) for panel in range(diagram.panels)]
    block_width = max(len(line) for line in blocks[0])

    lines: List[str] = []
    if diagram.title:
        lines.append(diagram.title)
    if diagram.panels > 1:
        lines.append(
            "  ".join(_panel_caption(diagram, p).ljust(block_width) for p in range(diagram.panels)).rstrip()
        )
    for row in range(len(blocks[0])):
        lines.append("  ".join(block[row].ljust(block_width) for block in blocks).rstrip())
    for index, layer in enumerate(diagram.layers):
        lines.append(f"{layer_letter(index, layer.style)}  {layer.label}  {layer.style.value}")
    return "\n".join(lines) + "\n"


def _edges(diagram: GridDiagram, cells: frozenset[GridIndex]) -> List[Tuple[int, int, int, str]]:
    """Unit boundary segments ``(panel, row, column, side)`` of a cell set, sorted."""

    occupied = {
        (pos.panel, pos.row, pos.column) for pos in (diagram.position(cell) for cell in cells)
    }
    neighbours = (("top", -1, 0), ("bottom", 1, 0), ("left", 0, -1), ("right", 0, 1))
    segments = []
    for panel, row, column in sorted(occupied):
        for side, dr, dc in neighbours:
            if (panel, row + dr, column + dc) not in occupied:
                segments.append((panel, row, column, side))
    return segments


def _svg_group(
    diagram: GridDiagram, origin_x: int, origin_y: int, size: int, increment: int
) -> Tuple[List[str], int, int]:
    gap = size
    title_height = size if diagram.title else 0
    caption_height = size // 2 + 4 if diagram.panels > 1 else 0
    grid_top = origin_y + title_height + caption_height
    panel_width = diagram.columns * size
    width = diagram.panels * panel_width + (diagram.panels - 1) * gap
    parts: List[str] = []

    if diagram.title:
        parts.append(
            f'<text x="{origin_x}" y="{origin_y + size - 8}" font-family="monospace" '
            f'font-size="{max(size // 2, 10)}">{escape(diagram.title)}</text>'
        )

    def panel_x(panel: int) -> int:
        return origin_x + panel * (panel_width + gap)

    for panel in range(diagram.panels):
        if diagram.panels > 1:
            parts.append(
                f'<text x="{panel_x(panel)}" y="{grid_top - 4}" font-family="monospace" '
                f'font-size="{max(size // 3, 8)}">{escape(_panel_caption(diagram, panel))}</text>'
            )
    for cell in iter_cells(diagram.scenario):
        pos = diagram.position(cell)
        parts.append(
            f'<rect x="{panel_x(pos.panel) + pos.column * size}" y="{grid_top + pos.row * size}" '
            f'width="{size}" height="{size}" fill="#ffffff" stroke="#cccccc" stroke-width="1"/>'
        )

    for layer in diagram.layers:
        color = layer_color(layer.color, increment)
        if layer.style is not LayerStyle.DASHED_TARGET:
            for cell in sorted(layer.cells):
                pos = diagram.position(cell)
                parts.append(
                    f'<rect x="{panel_x(pos.panel) + pos.column * size}" '
                    f'y="{grid_top + pos.row * size}" width="{size}" height="{size}" '
                    f'fill="{color.fill}" fill-opacity="0.45" stroke="none"/>'
                )
        path: List[str] = []
        for panel, row, column, side in _edges(diagram, layer.cells):
            x = panel_x(panel) + column * size
            y = grid_top + row * size
            if side == "top":
                path.append(f"M{x} {y}h{size}")
            elif side == "bottom":
                path.append(f"M{x} {y + size}h{size}")
            elif side == "left":
                path.append(f"M{x} {y}v{size}")
            else:
                path.append(f"M{x + size} {y}v{size}")
        dash = ' stroke-dasharray="6 4"' if layer.style is LayerStyle.DASHED_TARGET else ""
        parts.append(
            f'<path d="{" ".join(path)}" fill="none" stroke="{color.stroke}" '
            f'stroke-width="{3 if layer.style is LayerStyle.DASHED_TARGET else 2}"{dash}/>'
        )

    legend_top = grid_top + diagram.rows * size + size // 2
    for index, layer in enumerate(diagram.layers):
        color = layer_color(layer.color, increment)
        y = legend_top + index * (size // 2 + 6)
        dash = ' stroke-dasharray="3 2"' if layer.style is LayerStyle.DASHED_TARGET else ""
        fill = "none" if layer.style is LayerStyle.DASHED_TARGET else color.fill
        parts.append(
            f'<rect x="{origin_x}" y="{y}" width="{size // 2}" height="{size // 2}" '
            f'fill="{fill}" stroke="{color.stroke}"{dash}/>'
        )
        label = f"{layer_letter(index, layer.style)} {layer.label} ({layer.style.value})"
        parts.append(
            f'<text x="{origin_x + size // 2 + 6}" y="{y + size // 2 - 2}" '
            f'font-family="monospace" font-size="{max(size // 2 - 2, 8)}" '
            f'fill={quoteattr(color.text)}>{escape(label)}</text>'
        )
    height = legend_top - origin_y + len(diagram.layers) * (size // 2 + 6)
    return parts, width, height


def _svg_document(parts: Sequence[str], width: int, height: int) -> str:
    header = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
    )
    return header + "\n".join(parts) + "\n</svg>\n"


def emit_svg(diagram: GridDiagram, *, cell_size: Optional[int] = None) -> str:
    config = get_config().render
    size = config.cell_size if cell_size is None else cell_size
    margin = size
    parts, width, height = _svg_group(diagram, margin, margin, size, config.palette_increment)
    return _svg_document(parts, width + 2 * margin, height + 2 * margin)


def emit(
    diagram: GridDiagram,
    fmt: OutputFormat | str = OutputFormat.TEXT,
    *,
    ascii_only: Optional[bool] = None,
    cell_size: Optional[int] = None,
) -> str:
    """Render one diagram as ``text`` or ``svg``."""

    if OutputFormat(fmt) is OutputFormat.SVG:
        return emit_svg(diagram, cell_size=cell_size)
    return emit_text(diagram, ascii_only=ascii_only)


def emit_family(
    diagrams: Sequence[GridDiagram],
    fmt: OutputFormat | str = OutputFormat.TEXT,
    *,
    ascii_only: Optional[bool] = None,
    cell_size: Optional[int] = None,
) -> str:
    """Several diagrams in one document: blank-line separated text, or stacked SVG groups."""

    if OutputFormat(fmt) is OutputFormat.TEXT:
        return "\n".join(emit_text(diagram, ascii_only=ascii_only) for diagram in diagrams)
    config = get_config().render
    size = config.cell_size if cell_size is None else cell_size
    parts: List[str] = []
    y = size
    width = 0
    for diagram in diagrams:
        group, group_width, group_height = _svg_group(
            diagram, size, y, size, config.palette_increment
        )
        parts.extend(group)
        width = max(width, group_width)
        y += group_height + size
    return _svg_document(parts, width + 2 * size, y + size)


__all__ = [
    "ASCII_BOX",
    "OutputFormat",
    "UNICODE_BOX",
    "emit",
    "emit_family",
    "emit_svg",
    "emit_text",
    "layer_letter",
]
