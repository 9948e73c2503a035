"""Exception types raised by geocoh.

Validation failures derive from ``ValueError`` so callers that only care
about "bad input" can catch that.
"""


class GeocohError(Exception):
    """Base class for all package errors."""


class NonHermitian(GeocohError, ValueError):
    pass


class NotPSD(GeocohError, ValueError):
    pass


class NotSquare(GeocohError, ValueError):
    pass


class DimMismatch(GeocohError, ValueError):
    pass


class InvalidDensityMatrix(GeocohError, ValueError):
    pass


class InvalidEnsemble(GeocohError, ValueError):
    pass


class InvalidMeasurement(GeocohError, ValueError):
    pass


class GramMismatch(GeocohError, ValueError):
    pass


class WrongArity(GeocohError, ValueError):
    pass


class DependentEnsemble(GeocohError, ValueError):
    pass


class NoConvergence(GeocohError, RuntimeError):
    pass
