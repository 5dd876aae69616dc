class ResolventError(Exception):
    """Base class for every error raised by the services package."""


class ShapeError(ResolventError):
    """Matrix dimensions do not fit the requested operation."""


class CocycleMismatchError(ResolventError):
    """A sign cocycle was used with a complex it is not attached to."""


class IntegrityError(ResolventError):
    """An internal invariant failed (for example a boundary that does not square to zero)."""


class DataError(ResolventError):
    """Malformed table or descriptor data."""


class ContradictionError(ResolventError):
    """A declared differential is infeasible against the current page."""


class InconsistencyError(ResolventError):
    """No differential pattern or assignment satisfies the constraints."""


class AmbiguityError(ResolventError):
    """More than one pattern satisfies the constraints."""

    def __init__(self, message: str, candidates: list):
        super().__init__(message)
        self.candidates = candidates


class UnsupportedSizeError(ResolventError):
    """The requested model is outside the supported size range."""


class DegenerateInputError(ResolventError):
    """Input for which the question has no meaningful answer."""


class RegularValueNotFoundError(ResolventError):
    """Every candidate regular value was rejected."""


class PreconditionError(ResolventError):
    """An operation was called on inputs that do not satisfy its precondition."""


class ArityError(ResolventError):
    """A system has the wrong number of forms for the operation."""


class CensusError(ResolventError):
    """The census could not collect any certified sample."""


class VerificationError(ResolventError):
    """A recomputation disagrees with the stored data."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}
