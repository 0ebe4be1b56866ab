"""Simulation of electro-optic time-lens spectral bandwidth compression.

Units throughout: time in ps, angular frequency in rad/ps, frequency in THz,
wavelength in nm.
"""
from .errors import (
    AmbiguityError, ConfigError, DomainError, GridError, NumericalError, TimeLensError,
    UnsupportedElementError,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError", "ConfigError", "DomainError", "GridError", "NumericalError",
    "TimeLensError", "UnsupportedElementError", "__version__",
]
