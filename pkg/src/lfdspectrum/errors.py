"""Exception taxonomy and the exit-code contract.

Three failure families, mapped to process exit codes by the CLI:
  2  input errors (malformed files, bad dimensions, unparseable polynomials)
  3  mathematical failures (hypotheses of the theory not met, or no
     rational solution exists)
  4  resource caps exceeded (the computation was refused, not attempted)
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MATH = 3
EXIT_RESOURCE = 4


class LfdError(Exception):
    """Base class for all package errors."""

    exit_code = EXIT_MATH


class InputError(LfdError):
    exit_code = EXIT_INPUT


class PolyParseError(InputError):
    pass


class BadPresentation(InputError):
    """Input matrices fail basic shape or field requirements."""


class MathError(LfdError):
    exit_code = EXIT_MATH


class DeterminantVanishes(MathError):
    """Coefficient determinant is identically zero: not prehomogeneous."""


class NotReduced(MathError):
    """Determinant has a repeated factor: not a linear free divisor."""


class DegreeMismatch(MathError):
    pass


class NotSemiInvariant(MathError):
    """Some field does not rescale h: the basis does not stabilize D."""


class NotHomogeneous(MathError):
    pass


class NotFinite(MathError):
    """The section fails the finiteness condition needed downstream."""


class InvalidConnection(MathError):
    pass


class NoRationalRoot(MathError):
    """A consistency equation has no rational root.

    Carries the offending univariate polynomial (text form) so callers
    can report or retry over an extension field.
    """

    def __init__(self, message, poly_text=None):
        super().__init__(message)
        self.poly_text = poly_text


class InconsistentSystem(MathError):
    """Internal solvability bookkeeping failed; indicates a bug."""


class DimensionMismatch(MathError):
    pass


class SaitoFailure(MathError):
    """A constructed candidate basis is not a free divisor presentation."""


class IdentityFails(MathError):
    """A structural identity the theory guarantees did not hold.

    Signals an inconsistent presentation or an implementation bug."""


class UnsupportedParameter(InputError):
    """Catalog family parameter outside the supported range."""


class ExhaustedAttempts(MathError):
    """Seeded search gave up after the configured number of draws."""


class ExactDivisionError(MathError):
    """An asserted-exact polynomial division left a remainder."""


class StepBudgetExceeded(MathError):
    """An algorithm ran past its move budget; indicates a bug."""


class ResourceCapExceeded(LfdError):
    """Computation refused because a configured size cap would be passed."""

    exit_code = EXIT_RESOURCE


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, LfdError):
        return exc.exit_code
    return 1
