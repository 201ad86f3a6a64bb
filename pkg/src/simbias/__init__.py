"""Simplicity bias and low-complexity, low-probability outputs in input-output maps."""

__version__ = "0.1.0"
