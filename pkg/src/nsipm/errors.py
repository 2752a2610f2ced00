"""Exception hierarchy shared by the solver, verifier and CLI."""


class NsipmError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NsipmError):
    """Inconsistent construction input (empty product, bad dimensions)."""


class ParameterError(NsipmError, ValueError):
    """A scalar parameter is out of its admissible range."""


class InteriorViolation(NsipmError):
    """A point handed to a barrier is not in the interior of its cone."""


class ConditioningError(NsipmError):
    """A factorization failed or its condition estimate is unusable."""


class NoConvergence(NsipmError):
    """An inner iteration hit its cap without meeting its tolerance."""


class DegeneratePoint(NsipmError):
    """The complementarity gap is not strictly positive."""


class InvariantViolation(NsipmError):
    """An analysis guarantee (neighborhood membership, interiority) failed.

    Carries the offending iterate and any extra diagnostics in ``state``.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state or {}


class ProblemFileError(NsipmError):
    """Malformed or inconsistent problem file."""
