"""Exact tools for unit Hadamard and maximal determinant matrices over roots of unity."""
from __future__ import annotations

from .exactalg import CycInt, RootMatrix, det_abs2, det_exact, format_rum, gram, parse_rum

__version__ = "0.1.0"

__all__ = ["CycInt", "RootMatrix", "det_abs2", "det_exact", "format_rum", "gram", "parse_rum", "__version__"]
