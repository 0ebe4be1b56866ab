"""Units and conversions.

Internal base units are picoseconds for time and rad/ps for angular
frequency. Ordinary frequencies are in THz (1/ps), wavelengths in nm and only
appear at input/output boundaries.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

#: speed of light in vacuum [nm/ps] (CODATA exact value)
C_NM_PER_PS = 299_792.458

#: sqrt(ln 2), relates an intensity FWHM to the Gaussian width parameter
_SQRT_LN2 = math.sqrt(math.log(2.0))


def _check_positive(name, value):
    if not np.all(np.isfinite(value)) or not np.all(np.asarray(value) > 0):
        raise DomainError(f"{name} must be finite and strictly positive, got {value!r}")


def _check_finite(name, value):
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{name} must be finite, got {value!r}")


def wavelength_to_omega(wavelength_nm):
    """Angular frequency [rad/ps] of light with vacuum wavelength ``wavelength_nm``."""
    _check_positive("wavelength", wavelength_nm)
    return 2.0 * math.pi * C_NM_PER_PS / np.asarray(wavelength_nm, dtype=float)[()]


def omega_to_wavelength(omega):
    """Vacuum wavelength [nm] of an angular frequency given in rad/ps."""
    _check_positive("angular frequency", omega)
    return 2.0 * math.pi * C_NM_PER_PS / np.asarray(omega, dtype=float)[()]


def bandwidth_nm_to_thz(dlambda_nm, wavelength_nm):
    """Convert a wavelength width to an ordinary-frequency width.

    Uses the small-bandwidth relation ``dnu = c * dlambda / lambda0**2``.
    """
    _check_finite("bandwidth", dlambda_nm)
    _check_positive("central wavelength", wavelength_nm)
    if np.any(np.asarray(dlambda_nm) < 0):
        raise DomainError(f"bandwidth must be non-negative, got {dlambda_nm!r}")
    return C_NM_PER_PS * np.asarray(dlambda_nm, dtype=float)[()] / wavelength_nm**2


def bandwidth_thz_to_nm(dnu_thz, wavelength_nm):
    """Inverse of :func:`bandwidth_nm_to_thz`."""
    _check_finite("bandwidth", dnu_thz)
    _check_positive("central wavelength", wavelength_nm)
    if np.any(np.asarray(dnu_thz) < 0):
        raise DomainError(f"bandwidth must be non-negative, got {dnu_thz!r}")
    return np.asarray(dnu_thz, dtype=float)[()] * wavelength_nm**2 / C_NM_PER_PS


def omega_shift_to_nm(domega, wavelength_nm):
    """Wavelength shift [nm] corresponding to a small angular-frequency shift."""
    return bandwidth_thz_to_nm(abs(domega) / (2.0 * math.pi), wavelength_nm) * np.sign(domega)


def fwhm_to_width_param(dnu_thz):
    """Gaussian width parameter ``dw`` [rad/ps] from an intensity FWHM [THz].

    The spectral intensity ``exp(-w**2 / dw**2)`` has FWHM
    ``dnu = sqrt(ln 2) * dw / pi`` in ordinary frequency.
    """
    _check_positive("FWHM bandwidth", dnu_thz)
    return math.pi * np.asarray(dnu_thz, dtype=float)[()] / _SQRT_LN2


def width_param_to_fwhm(dw):
    """Intensity FWHM [THz] from the Gaussian width parameter [rad/ps]."""
    _check_positive("width parameter", dw)
    return _SQRT_LN2 * np.asarray(dw, dtype=float)[()] / math.pi


def ghz(value_ghz):
    """GHz to THz, the internal frequency unit."""
    return value_ghz * 1e-3
