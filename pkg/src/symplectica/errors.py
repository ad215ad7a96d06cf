"""Exception types raised across the package.

Every error derives from :class:`SymplecticaError`, which the command line
maps to exit code 1 (domain failure).
"""


class SymplecticaError(Exception):
    """Base class for domain errors."""


class NonSymmetric(SymplecticaError):
    pass


class NoConvergence(SymplecticaError):
    pass


class Singular(SymplecticaError):
    pass


class DimensionMismatch(SymplecticaError):
    pass


class NonPositiveSqueeze(SymplecticaError):
    pass


class NotSymplectic(SymplecticaError):
    pass


class BadModeIndex(SymplecticaError):
    pass


class UnphysicalTemperature(SymplecticaError):
    pass


class UnphysicalState(SymplecticaError):
    """Covariance matrix violates the uncertainty relation."""


class NotPositiveDefinite(SymplecticaError):
    pass


class ConditionViolated(SymplecticaError):
    pass


class NotPure(SymplecticaError):
    pass


class Not3Mode(SymplecticaError):
    pass


class BadParamShape(SymplecticaError):
    pass


class TooFewModes(SymplecticaError):
    pass


class EnergyBelowVacuum(SymplecticaError):
    pass


class DegenerateSpectrum(UserWarning):
    """Local symplectic spectrum has repeated non-unit values."""
