"""Closed-form Gaussian pulses through quadratic-phase chains.

A pulse is carried by its complex spectral width parameter ``p`` [ps^2]::

    spec(w) = a * exp(-p w**2 / 2),      psi(t) = a p^(-1/2) exp(-t**2 / (2 p))

under the Fourier convention of :mod:`timelens.envelope`. Each supported element
acts on ``p`` exactly:

* GDD ``phi``:            p -> p - i phi
* lens ``K``:         1/p -> 1/p - i K         (a -> a sqrt(p'/p))
* filter ``dw_F``:        p -> p + 1/dw_F**2   (co-centred only)
* attenuator ``eta``:     a -> a sqrt(eta)

The spectral intensity is ``|a|^2 exp(-Re(p) w**2)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .elements import Attenuator, Gdd, GaussianFilter, QuadraticLens
from .errors import DomainError, UnsupportedElementError
from .units import fwhm_to_width_param

_LN2 = math.log(2.0)


def _positive(**values):
    for name, v in values.items():
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be finite and positive, got {v!r}")


@dataclass(frozen=True)
class GaussianPulse:
    omega0: float
    p: complex
    amplitude_scale: complex = 1.0

    def __post_init__(self):
        if not self.p.real > 0:
            raise DomainError(f"Re(p) must be positive for a normalizable pulse, got {self.p!r}")

    @classmethod
    def from_fwhm(cls, omega0, fwhm_thz):
        """Unit-energy transform-limited pulse of spectral intensity FWHM ``fwhm_thz``."""
        dw = fwhm_to_width_param(fwhm_thz)
        return cls(omega0, complex(1.0 / dw**2), complex(math.pi**-0.25 / math.sqrt(dw)))

    @property
    def energy(self):
        return abs(self.amplitude_scale) ** 2 * math.sqrt(math.pi / self.p.real)

    @property
    def spectral_width(self):
        """1/e half-width of the spectral intensity [rad/ps]."""
        return 1.0 / math.sqrt(self.p.real)

    def spectral_fwhm(self):
        """Spectral intensity FWHM [THz]."""
        return 2.0 * math.sqrt(_LN2 / self.p.real) / (2.0 * math.pi)

    def temporal_fwhm(self):
        """Temporal intensity FWHM [ps]."""
        return 2.0 * math.sqrt(_LN2 / (1.0 / self.p).real)

    def spectrum(self, detuning):
        w = np.asarray(detuning)
        return self.amplitude_scale * np.exp(-0.5 * self.p * w * w)

    def field(self, t):
        t = np.asarray(t)
        return self.amplitude_scale / cmath.sqrt(self.p) * np.exp(-t * t / (2.0 * self.p))


@dataclass(frozen=True)
class JitterModel:
    """Timing offsets ``tau`` with density ``exp(-(tau/T)**2) / (sqrt(pi) T)``.

    The standard deviation of ``tau`` is ``T / sqrt(2)``, not ``T``.
    """

    T: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T >= 0):
            raise DomainError(f"jitter width must be >= 0, got {self.T!r}")

    @property
    def std(self):
        return self.T / math.sqrt(2.0)


def _apply(pulse, element):
    p, a = pulse.p, pulse.amplitude_scale
    if isinstance(element, Gdd):
        p = p - 1j * element.phi
    elif isinstance(element, QuadraticLens):
        if element.t0 != 0:
            raise UnsupportedElementError("offset lenses are not Gaussian-exact")
        q = 1.0 / (1.0 / p - 1j * element.k)
        a = a * cmath.sqrt(q) / cmath.sqrt(p)
        p = q
    elif isinstance(element, GaussianFilter):
        if element.center is not None and element.center != pulse.omega0:
            raise UnsupportedElementError("only filters centred on the carrier are supported")
        if not math.isinf(element.width):
            p = p + 1.0 / element.width**2
    elif isinstance(element, Attenuator):
        a = a * math.sqrt(element.eta)
    else:
        raise UnsupportedElementError(
            f"{type(element).__name__} has no closed-form Gaussian action")
    return GaussianPulse(pulse.omega0, complex(p), complex(a))


def propagate(pulse, chain):
    """Exact output of ``chain`` for a Gaussian input."""
    for element in chain:
        pulse = _apply(pulse, element)
    return pulse


def compressed_bandwidth(fwhm_thz, k):
    """Collimated-output intensity FWHM ``(ln2 / pi^2) K / dnu0`` [THz]."""
    _positive(bandwidth=fwhm_thz, chirp=k)
    return _LN2 / math.pi**2 * k / fwhm_thz


def compression_factor(fwhm_thz, k):
    """Input over output bandwidth, ``(pi^2 / ln2) dnu0^2 / K``."""
    _positive(bandwidth=fwhm_thz, chirp=k)
    return math.pi**2 / _LN2 * fwhm_thz**2 / k


def jitter_broadening(dw, T):
    """Factor ``sqrt(1 + T^2 dw^2)`` by which timing jitter widens the output."""
    return math.sqrt(1.0 + (T * dw) ** 2)


def jittered_spectrum(dw, k, T, detuning):
    """Jitter-averaged collimated output spectral intensity (normalized over w).

    Gaussian with 1/e half-width ``(K / dw) sqrt(1 + T^2 dw^2)``.
    """
    _positive(width=dw, chirp=k)
    if not T >= 0:
        raise DomainError("jitter width must be >= 0")
    width = k / dw * jitter_broadening(dw, T)
    w = np.asarray(detuning, dtype=float)
    return np.exp(-(w / width) ** 2) / (math.sqrt(math.pi) * width)


def jittered_bandwidth(fwhm_thz, k, T):
    """FWHM [THz] of :func:`jittered_spectrum` in terms of the input FWHM."""
    if not T >= 0:
        raise DomainError("jitter width must be >= 0")
    factor = math.sqrt(1.0 + math.pi**2 / _LN2 * T**2 * fwhm_thz**2)
    return compressed_bandwidth(fwhm_thz, k) * factor
