"""Exception and warning types raised across the package."""


class AntiPTError(Exception):
    """Base class for package errors."""


class UndefinedNormalization(AntiPTError, ZeroDivisionError):
    """Normalized eigenvalues requested with zero dissipation."""


class InvalidOverlap(AntiPTError, ValueError):
    """Overlap probability cannot be inverted (non-positive or non-finite)."""


class InvalidRegime(AntiPTError, ValueError):
    """CPT construction requested outside r = Gamma/J < 1."""


class ZeroState(AntiPTError, ValueError):
    pass


class InvalidState(AntiPTError, ValueError):
    """State norm exceeds one beyond tolerance."""


class FitDiverged(AntiPTError, RuntimeError):
    pass


class DegenerateTrace(AntiPTError, ValueError):
    """Reconstructed density matrix has (almost) no population left."""


class AliasWarning(UserWarning):
    """Frequency fit found more than one equally good candidate."""
