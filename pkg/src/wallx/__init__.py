"""wallx: exact engine for the quantized wall-crossing of pair and semistable invariants."""

from .ring import SPoly, SRat, classical_limit, qint, qint_addition_residual, srat

__version__ = "0.1.0"

__all__ = ["SPoly", "SRat", "classical_limit", "qint", "qint_addition_residual", "srat"]
