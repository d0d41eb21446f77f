"""Exception types shared across the package."""


class RydchebError(Exception):
    """Base class for all package errors."""


class ParseError(RydchebError):
    """Parameter file is not valid JSON / not a mapping."""


class SchemaError(RydchebError):
    """Parameter file violates the documented schema; names the failing field."""


class DomainError(RydchebError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NoBoundRegion(RydchebError):
    """No classically allowed region exists at the requested energy."""


class ConvergenceError(RydchebError):
    """Iterative solve failed to reach tolerance.

    Carries the best residual achieved in ``best_residual`` when available.
    """

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class AnomalyError(RydchebError):
    """A second classical region intersects the requested action integral.

    A plain two-turning-point treatment is unreliable here; callers must
    opt in explicitly (``ignore_inner_region=True``) to proceed anyway.
    """


class InsufficientDomain(RydchebError):
    """Grid does not extend far enough past the outer turning point to judge decay."""
