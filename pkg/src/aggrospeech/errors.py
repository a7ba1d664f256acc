"""Exception hierarchy.

Each top-level family carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class AggroError(Exception):
    exit_code = 2


class ConfigError(AggroError):
    exit_code = 1


class DataError(AggroError):
    exit_code = 2


class NumericError(AggroError):
    exit_code = 3


# corpus-io
class MalformedContainer(DataError):
    pass


class UnsupportedEncoding(DataError):
    pass


class ZeroSamples(DataError):
    pass


class TextGridSyntaxError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PointTierUnsupported(DataError):
    pass


class OverlappingIntervals(DataError):
    pass


class MissingTier(DataError):
    pass


class UnknownLabel(DataError):
    pass


class DurationMismatch(DataError):
    pass


# dsp-features
class TooShort(DataError):
    pass


class NoVoicedRegion(DataError):
    pass


class InsufficientPeriods(DataError):
    pass


# stats
class MissingFeature(DataError):
    pass


class ClassTooSmall(DataError):
    pass


class DegenerateVariance(NumericError):
    pass


# classifier
class RegistryMismatch(DataError):
    pass


class EmptyGrid(ConfigError):
    pass


class SingleLabel(DataError):
    pass


class ClassTooSmallWarning(UserWarning):
    pass


class NoConvergenceWarning(UserWarning):
    pass
