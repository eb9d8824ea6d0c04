"""Exception and warning types raised by :mod:`fracsobolev`."""

from __future__ import annotations


class FracSobolevError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(FracSobolevError, ValueError):
    """Invalid arguments (bad parameters, malformed text input)."""


class NumericalError(FracSobolevError, ArithmeticError):
    """A numerical precondition or consistency check failed."""


class DomainTooSmallError(UsageError):
    """A test function does not fit (or does not decay) inside the grid."""


class GridMismatchError(UsageError):
    """Two sampled objects live on different grids."""


class InvalidOrderError(UsageError):
    """An operator order is outside its admissible range."""


class DecompositionParseError(UsageError):
    """An order decomposition string does not follow the grammar."""


class EmptyBatteryError(UsageError):
    """A test-function battery was empty."""


class SymmetryViolationError(NumericalError):
    """Inverse transform produced a significant imaginary part."""


class NonzeroMeanError(NumericalError):
    """Spectral fractional integration of a function with nonzero mean."""


class SmoothnessWarning(UserWarning):
    """Input is not resolved by the grid (energy in the top octave)."""
