"""Exception hierarchy shared by every fringelab module."""


class FringelabError(Exception):
    """Base class for all errors raised by fringelab."""


class ValidationError(FringelabError, ValueError):
    """A matrix, vector or parameter violates its invariants."""


class NormalizationError(ValidationError):
    """Amplitudes or ancilla states are not unit-normalized."""


class DimensionError(ValidationError):
    """Path counts of combined objects disagree, or a grid would be too large."""


class DegenerateBlockError(FringelabError, ValueError):
    """Both paths of a requested pair carry zero population."""


class UnsupportedOperationError(FringelabError):
    """The operation is not defined for the given phase model or state."""


class UndefinedVisibilityError(FringelabError, ValueError):
    """Contrast is undefined because the pattern is identically dark."""


class MeasureInapplicableError(FringelabError):
    """The pattern-based recipe cannot recover the measure for this scenario."""


class ScenarioParseError(FringelabError):
    """A scenario document is malformed.

    ``location`` holds the key path or line that triggered the failure.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
