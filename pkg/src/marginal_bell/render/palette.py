"""Color palette generator for diagram layers.

Generates visually distinct layer colors using hue rotation. Each layer gets a
monochromatic trio (fill, stroke, text) that reads on a white background.
"""
from __future__ import annotations

import colorsys
from dataclasses import dataclass
from typing import Dict, Tuple

PALETTE_SIZE = 8


@dataclass(frozen=True, slots=True)
class LayerColor:
    """Colors for one diagram layer."""

    hue: int
    fill: str
    stroke: str
    text: str

    def to_dict(self) -> Dict[str, str | int]:
        return {"hue": self.hue, "fill": self.fill, "stroke": self.stroke, "text": self.text}


class ColorPaletteGenerator:
    """Distinct layer colors from ``(start + increment * n) % 360``.

    An increment coprime to 360 (101 by default) keeps consecutive layers far
    apart on the hue wheel.
    """

    def __init__(self, increment: int = 101, start: int = 0) -> None:
        self.increment = increment
        self.start = start % 360

    def _hsl_to_hex(self, h: float, s: float, l: float) -> str:
        """Convert HSL (degrees, percent, percent) to ``#rrggbb``."""
        r, g, b = colorsys.hls_to_rgb(h / 360.0, l / 100.0, s / 100.0)
        return f"#{round(r * 255):02x}{round(g * 255):02x}{round(b * 255):02x}"

    def _generate_color(self, hue: int) -> LayerColor:
        return LayerColor(
            hue=hue,
            fill=self._hsl_to_hex(hue, 70, 80),
            stroke=self._hsl_to_hex(hue, 65, 35),
            text=self._hsl_to_hex(hue, 60, 25),
        )

    def color_for_index(self, index: int) -> LayerColor:
        hue = (self.start + (self.increment * index)) % 360
        return self._generate_color(hue)

    def palette(self, size: int = PALETTE_SIZE) -> Tuple[LayerColor, ...]:
        return tuple(self.color_for_index(index) for index in range(size))


def layer_color(index: int, increment: int = 101) -> LayerColor:
    """Entry ``index`` of the fixed palette, wrapping after ``PALETTE_SIZE``."""

    return ColorPaletteGenerator(increment=increment).color_for_index(index % PALETTE_SIZE)


__all__ = ["ColorPaletteGenerator", "LayerColor", "PALETTE_SIZE", "layer_color"]
