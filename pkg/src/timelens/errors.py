"""Exception hierarchy shared by every module.

Configuration problems and numerical/grid problems are kept apart because the
command line maps them to different exit codes.
"""


class TimeLensError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TimeLensError, ValueError):
    """A physical quantity is outside the domain of an operation."""


class ConfigError(TimeLensError):
    """A scenario, catalog or element description is invalid."""


class UnsupportedElementError(ConfigError):
    """An element cannot be handled by the requested channel."""


class NumericalError(TimeLensError):
    """A numerical procedure could not produce a trustworthy result."""


class GridError(NumericalError):
    """The sampling grid is too short or too coarse for the requested field."""


class AmbiguityError(NumericalError):
    """A width measurement has more than one candidate answer."""
