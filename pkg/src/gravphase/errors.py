"""Exception hierarchy shared by all gravphase modules."""


class GravPhaseError(Exception):
    """Base class for every error raised by this package."""


class InvalidQuantityError(GravPhaseError, ValueError):
    """A physical quantity is non-finite or outside its allowed range."""


class UnitError(GravPhaseError, TypeError):
    """A quantity of one kind was passed where another kind is required."""


class DomainError(GravPhaseError, ValueError):
    """An operation was evaluated outside its mathematical domain."""


class InfiniteWavelengthError(DomainError, ZeroDivisionError):
    """Wavelength of a particle at rest."""


class ConfigError(GravPhaseError, ValueError):
    """Bad scenario or run configuration.

    ``field`` names the offending configuration key when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class UnsupportedSequenceError(GravPhaseError, ValueError):
    """The pulse sequence is not the canonical pi/2 - pi - pi/2 Mach-Zehnder."""


class RangeError(GravPhaseError, ValueError):
    """A trajectory was evaluated outside its time span."""


class ResolutionError(GravPhaseError, ValueError):
    """A spatial grid is too coarse to resolve the fringes."""


class UnidentifiableError(GravPhaseError, ValueError):
    """The data or configuration cannot determine the requested parameter."""


class FitFailure(GravPhaseError, RuntimeError):
    """Iterative fit did not converge; carries diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
