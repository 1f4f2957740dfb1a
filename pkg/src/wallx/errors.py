"""Exception hierarchy shared by every wallx module."""

from __future__ import annotations


class WallxError(Exception):
    """Base class for all engine errors."""


class PoleError(WallxError, ZeroDivisionError):
    """A value was requested at a point where the function has a pole."""


class LimitError(WallxError):
    """A limit at z = 0 or z = oo does not exist."""


class WeightError(WallxError, ValueError):
    """A K-theory weight is not allowed in this position (e.g. a = 0)."""


class ConfigurationError(WallxError, ValueError):
    """A class lattice violates an integrality or positivity requirement."""


class ZeroQuantumIntegerError(WallxError, ZeroDivisionError):
    """Inversion would divide by the quantum integer [0]_t = 0."""


class MissingEntryError(WallxError, KeyError):
    """An invariant table lacks a class needed by the computation."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class FramingWarning(UserWarning):
    """Some framing dimension lambda_k is not positive; k is probably too small."""
