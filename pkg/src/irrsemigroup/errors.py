"""Exception hierarchy.

Every failure raised by the library derives from :class:`AnalysisError` so
callers (the CLI in particular) can map them to exit codes without string
matching.
"""


class AnalysisError(Exception):
    """Base class for all library errors."""


class InputError(AnalysisError, ValueError):
    """Malformed input: wrong shape, signed entries, dimension mismatch."""


class ConvergenceError(AnalysisError):
    """An iterative numerical routine hit its iteration cap."""


class QuasinilpotentError(AnalysisError):
    """The operator has spectral radius zero, so it has no peripheral splitting."""


class SpectralSeparationError(AnalysisError):
    """Peripheral eigenvalues are not numerically separated from the rest."""


class ReturnHorizonExceeded(AnalysisError):
    """No return index was found within the scan horizon."""

    def __init__(self, message, best_m=None, best_error=None):
        super().__init__(message)
        self.best_m = best_m
        self.best_error = best_error


class ReducibleError(AnalysisError):
    """An operation requiring an irreducible family received a reducible one."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BallExplosion(AnalysisError):
    """Word enumeration produced more rays than the configured cap."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class InconclusiveError(AnalysisError):
    """The finite approximation is too small to decide; increase L or N."""


class StructureError(AnalysisError):
    """A structural extraction failed (tolerance breach or wrong regime)."""
