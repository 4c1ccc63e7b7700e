from __future__ import annotations


class QuannError(Exception):
    """Base class for every error the simulator raises on purpose."""
    exit_code: int = 1


class ConfigError(QuannError):
    exit_code = 64


class InvalidParameterError(QuannError, ValueError):
    exit_code = 64


class DimensionError(QuannError, ValueError):
    exit_code = 65


class NetworkDefinitionError(QuannError):
    exit_code = 65


class DataFormatError(QuannError):
    exit_code = 65


class SeriesError(QuannError, ValueError):
    exit_code = 65


class NumericalError(QuannError):
    exit_code = 3


class GuardError(QuannError):
    exit_code = 3


class RadiusRangeError(QuannError):
    exit_code = 3


class UndefinedProbabilityError(QuannError):
    exit_code = 3


class VerificationError(QuannError):
    exit_code = 2
