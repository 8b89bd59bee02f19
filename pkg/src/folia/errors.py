"""Exception taxonomy shared across the package.

Errors are split by cause so the service layer can map them to HTTP codes
and the CLI to exit codes: bad input shape vs. a mathematical precondition
that the given (well-formed) input fails.
"""


class FoliaError(Exception):
    """Base class for all domain errors."""


class ContextMismatch(FoliaError):
    """Operands live over different variable contexts."""


class ExactDivisionError(FoliaError):
    """A division that was required to be exact left a remainder."""


class NonPolynomialInput(FoliaError):
    """Operation needs polynomial coefficients but got a proper fraction."""


class NonHomogeneousInput(FoliaError):
    """Operation needs a homogeneous form; mixed degrees are not truncated."""


class TopDegreeError(FoliaError):
    """Result would exceed the top representable form degree."""


class TruncationError(FoliaError):
    """Requested order exceeds the configured or recorded truncation."""


class ParameterError(FoliaError):
    """Too many parameters, or a parameter decision the caller must make."""


class DegreeConstraintError(FoliaError):
    """A component polynomial violates its required degree."""


class DivisibilityError(FoliaError):
    """A required exact divisibility (closed-form precondition) fails."""


class JetInconsistency(FoliaError):
    """A 1-jet shape is incompatible with integrability assumptions."""


class SingularityError(FoliaError):
    """Input is singular/nonsingular where the operation needs the opposite."""
