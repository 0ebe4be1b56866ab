"""Photon flux into a narrowband Gaussian absorber, with and without compression.

The absorber is a unit-peak Gaussian intensity transmission
``exp(-(w - w_c)**2 / dw_F**2)``; ``dw_F`` is the width parameter of its
intensity FWHM (see :func:`timelens.units.fwhm_to_width_param`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .units import fwhm_to_width_param


@dataclass(frozen=True)
class AbsorberSpec:
    fwhm_thz: float
    center: float

    def __post_init__(self):
        if not (math.isfinite(self.fwhm_thz) and self.fwhm_thz > 0):
            raise DomainError(f"absorber FWHM must be positive, got {self.fwhm_thz!r}")

    @property
    def width(self):
        """Width parameter ``dw_F`` [rad/ps]."""
        return fwhm_to_width_param(self.fwhm_thz)

    def transmission(self, omega):
        return np.exp(-((np.asarray(omega) - self.center) / self.width) ** 2)


def _check(dw, dw_f, k=None, T=None, eta=None):
    if not (dw > 0 and dw_f > 0) or not math.isfinite(dw):
        raise DomainError("pulse and absorber widths must be positive")
    if k is not None and not (k > 0 and math.isfinite(k)):
        raise DomainError(f"chirp factor must be positive, got {k!r}")
    if T is not None and not (T >= 0 and math.isfinite(T)):
        raise DomainError(f"jitter width must be >= 0, got {T!r}")
    if eta is not None and not 0 < eta <= 1:
        raise DomainError(f"compressor transmission must lie in (0, 1], got {eta!r}")


def flux_direct(dw, dw_f):
    """Fraction of a co-centred Gaussian pulse absorbed without compression."""
    _check(dw, dw_f)
    return (1.0 + (dw / dw_f) ** 2) ** -0.5


def flux_compressed(dw, dw_f, k, T, eta):
    """Fraction absorbed after a collimating compressor of chirp ``k``,
    timing jitter ``T`` and transmission ``eta``."""
    _check(dw, dw_f, k, T, eta)
    return eta * (1.0 + (k / (dw * dw_f)) ** 2 * (1.0 + (T * dw) ** 2)) ** -0.5


def absorption_ratio(dw, dw_f, k, T, eta):
    """Flux with the compressor divided by flux without it."""
    _check(dw, dw_f, k, T, eta)
    return eta * math.sqrt((1.0 + (dw / dw_f) ** 2)
                           / (1.0 + (k / (dw * dw_f)) ** 2 * (1.0 + (T * dw) ** 2)))


def numeric_flux(intensity, omega, absorber, rtol=1e-6):
    """Overlap of a sampled spectral intensity with the absorber transmission.

    Parameters
    ----------
    intensity : array_like
        Spectral intensity on the uniform absolute angular-frequency axis
        ``omega`` [rad/ps], normalized so that ``sum(intensity) * domega == 1``.
    absorber : AbsorberSpec

    Raises
    ------
    DomainError
        If the spectrum is not normalized to within ``rtol``.
    """
    s = np.asarray(intensity, dtype=float)
    omega = np.asarray(omega, dtype=float)
    domega = (omega[-1] - omega[0]) / (omega.size - 1)
    total = s.sum() * domega
    if not abs(total - 1.0) <= rtol:
        raise DomainError(f"spectrum is not normalized (integral {total:.9g})")
    return float(np.sum(s * absorber.transmission(omega)) * domega)
