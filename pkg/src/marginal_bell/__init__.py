"""Marginal Bell - underlying-probability grids and Bell inequality certificates."""

__version__ = "0.1.0"
