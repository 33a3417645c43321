"""Exception hierarchy.

Precondition-type failures (bad parameters, points outside a region) derive from
``PreconditionError`` and map to CLI exit code 2; summation and quadrature
failures derive from ``ConvergenceFailure`` and map to exit code 3.
"""

from __future__ import annotations


class HumbertError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(HumbertError, ValueError):
    """An input violates a stated hypothesis of the requested method.

    ``failed`` lists the individual hypotheses that did not hold.
    """

    def __init__(self, message: str, failed: list[str] | None = None):
        self.failed = list(failed or [])
        if self.failed:
            message = f"{message}: " + "; ".join(self.failed)
        super().__init__(message)


class GammaPoleError(PreconditionError):
    """A gamma function (or Pochhammer denominator) was evaluated at a pole."""


class DomainError(PreconditionError):
    """The argument lies outside the domain of the requested function or method."""


class ExclusionZoneError(PreconditionError):
    """The argument lies too close to a lattice of excluded points."""


class NoMethodError(PreconditionError):
    """No evaluation route applies at the requested point."""


class ConvergenceFailure(HumbertError, ArithmeticError):
    """Base class for numerical failures."""


class DivergentSeriesError(ConvergenceFailure):
    """The requested series diverges at the given argument."""


class ConvergenceError(ConvergenceFailure):
    """The term budget was exhausted before the tolerance was reached."""


class NonFiniteError(ConvergenceFailure, OverflowError):
    """A non-finite value would have escaped a public operation."""
