"""Differential Evolution boundary-handling and structural-bias laboratory."""

__version__ = "0.1.0"
