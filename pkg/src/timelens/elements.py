"""Optical elements acting on sampled envelopes.

Every element is an immutable descriptor with an ``apply(env)`` method;
chains are plain sequences applied left to right by :func:`apply_chain`.

Sign conventions follow :mod:`timelens.envelope` (analysis kernel
``exp(+i w t)``, synthesis ``exp(-i w t)``):

* ``Gdd(phi)`` multiplies the spectrum by ``exp(i phi w**2 / 2)``, so the
  detuning ``w`` arrives at time ``phi * w``.
* ``QuadraticLens(k)`` multiplies the field by ``exp(i k t**2 / 2)`` with
  ``t`` measured from the pulse centroid. A positive-GDD pulse is collimated by
  the lens of the same sign; :func:`focusing_sign` verifies this numerically
  and the sinusoidal modulator uses it to decide which extremum focuses.
* A temporal phase with negative slope shifts the spectrum up.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .envelope import (
    SampledEnvelope, TimeGrid, centroid, check_guard, expi, rms_duration,
    spectrum_array, synthesize_gaussian, time_array,
)
from .errors import DomainError

_FOCUSING = "focusing"
_DIVERGING = "diverging"


def _finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


def apply_gdd(env, phi):
    """Quadratic spectral phase ``phi * w**2 / 2`` [phi in ps^2]."""
    _finite("GDD", phi)
    if phi == 0:
        return env
    w = env.grid.detuning
    spec = spectrum_array(env.samples, env.grid) * expi(0.5 * phi * w * w)
    out = env.replace(time_array(spec, env.grid))
    return check_guard(out, f"after GDD of {phi:g} ps^2")


def _lens_time(env, t0):
    return env.t - centroid(env) - t0


def apply_quadratic_lens(env, k, t0=0.0):
    """Temporal phase ``k * (t - t_c - t0)**2 / 2`` with ``t_c`` the pulse centroid."""
    _finite("chirp factor", k)
    if k == 0:
        return env
    tbar = _lens_time(env, t0)
    return env.replace(env.samples * expi(0.5 * k * tbar * tbar))


def _curvature_sign(sign):
    if sign == _FOCUSING:
        return focusing_sign()
    if sign == _DIVERGING:
        return -focusing_sign()
    raise DomainError(f"lens sign must be 'focusing' or 'diverging', got {sign!r}")


def sinusoidal_phase(tbar, amplitude, f_rf, t0=0.0, sign=_FOCUSING):
    """``A sin(2 pi f (tbar - t0) + phi_ext)`` with the requested extremum at ``t0``."""
    s = _curvature_sign(sign)
    x = 2.0 * math.pi * f_rf * (np.asarray(tbar) - t0)
    return amplitude * np.sin(x - s * 0.5 * math.pi)


def apply_sinusoidal_eom(env, amplitude, f_rf, t0=0.0, sign=_FOCUSING):
    """Single-tone electro-optic phase modulation centred on an extremum.

    Near ``t0`` the phase is ``+-(K/2) (t - t0)**2`` up to a constant, with
    ``K = 4 pi^2 f_rf^2 A``.
    """
    if amplitude == 0:
        return env
    tbar = _lens_time(env, 0.0)
    return env.replace(env.samples * expi(sinusoidal_phase(tbar, amplitude, f_rf, t0, sign)))


def apply_linear_shear(env, amplitude, f_rf, slope="up"):
    """Sinusoidal modulation with the pulse on a zero crossing.

    The local linear phase shifts the spectrum by ``+-2 pi A f_rf``
    (``slope='up'`` raises the frequency). A warning is attached to the result
    when the pulse is not short compared with ``1 / (2 pi f_rf)``.
    """
    if slope not in ("up", "down"):
        raise DomainError(f"slope must be 'up' or 'down', got {slope!r}")
    s = 1.0 if slope == "up" else -1.0
    tbar = _lens_time(env, 0.0)
    phase = -s * amplitude * np.sin(2.0 * math.pi * f_rf * tbar)
    fill = 2.0 * math.pi * f_rf * rms_duration(env)
    warning = None
    if fill > 0.1:
        warning = (f"linear shear: pulse rms duration is {fill:.3g} of 1/(2 pi f_RF); "
                   "the linear approximation is poor")
    return env.replace(env.samples * expi(phase), warning)


def filter_amplitude(omega, width, center):
    """Unit-peak Gaussian amplitude transmission; intensity is ``exp(-(w - wc)**2 / width**2)``."""
    if math.isinf(width):
        return np.ones_like(np.asarray(omega, dtype=float))
    return np.exp(-0.5 * ((np.asarray(omega) - center) / width) ** 2)


def apply_gaussian_filter(env, width, center=None):
    """Spectral filter of width parameter ``width`` [rad/ps] centred at ``center``.

    ``center`` is an absolute angular frequency; ``None`` means the carrier.
    """
    if not width > 0:
        raise DomainError(f"filter width must be positive, got {width!r}")
    if math.isinf(width):
        return env
    center = env.carrier if center is None else center
    omega = env.carrier + env.grid.detuning
    spec = spectrum_array(env.samples, env.grid) * filter_amplitude(omega, width, center)
    return env.replace(time_array(spec, env.grid))


def apply_attenuator(env, eta):
    if not 0 < eta <= 1:
        raise DomainError(f"transmission must lie in (0, 1], got {eta!r}")
    return env.replace(env.samples * math.sqrt(eta))


@dataclass(frozen=True)
class Gdd:
    phi: float

    def apply(self, env):
        return apply_gdd(env, self.phi)


@dataclass(frozen=True)
class QuadraticLens:
    k: float
    t0: float = 0.0

    def phase(self, tbar):
        x = np.asarray(tbar) - self.t0
        return 0.5 * self.k * x * x

    def shifted(self, tau):
        return replace(self, t0=self.t0 + tau)

    def apply(self, env):
        return apply_quadratic_lens(env, self.k, self.t0)


@dataclass(frozen=True)
class SinusoidalEom:
    amplitude: float
    f_rf: float
    t0: float = 0.0
    sign: str = _FOCUSING

    def __post_init__(self):
        if self.amplitude < 0 or not math.isfinite(self.amplitude):
            raise DomainError(f"modulation depth must be >= 0, got {self.amplitude!r}")
        if not self.f_rf > 0:
            raise DomainError(f"RF frequency must be positive, got {self.f_rf!r}")
        _curvature_sign(self.sign)

    @property
    def chirp(self):
        """Signed curvature of the phase at the extremum [ps^-2]."""
        return _curvature_sign(self.sign) * 4.0 * math.pi**2 * self.f_rf**2 * self.amplitude

    def phase(self, tbar):
        return sinusoidal_phase(tbar, self.amplitude, self.f_rf, self.t0, self.sign)

    def shifted(self, tau):
        return replace(self, t0=self.t0 + tau)

    def quadratic_limit(self):
        return QuadraticLens(self.chirp, self.t0)

    def apply(self, env):
        return apply_sinusoidal_eom(env, self.amplitude, self.f_rf, self.t0, self.sign)


@dataclass(frozen=True)
class LinearShear:
    amplitude: float
    f_rf: float
    slope: str = "up"

    @property
    def shift(self):
        """Nominal angular-frequency shift [rad/ps]."""
        s = 1.0 if self.slope == "up" else -1.0
        return s * 2.0 * math.pi * self.amplitude * self.f_rf

    def apply(self, env):
        return apply_linear_shear(env, self.amplitude, self.f_rf, self.slope)


@dataclass(frozen=True)
class GaussianFilter:
    width: float
    center: float | None = None

    def amplitude(self, omega, carrier):
        center = carrier if self.center is None else self.center
        return filter_amplitude(omega, self.width, center)

    def apply(self, env):
        return apply_gaussian_filter(env, self.width, self.center)


@dataclass(frozen=True)
class Attenuator:
    eta: float

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise DomainError(f"transmission must lie in (0, 1], got {self.eta!r}")

    def apply(self, env):
        return apply_attenuator(env, self.eta)


LENS_TYPES = (QuadraticLens, SinusoidalEom)
#: elements diagonal in frequency
SPECTRAL_TYPES = (Gdd, GaussianFilter, Attenuator)


def apply_chain(env, chain):
    """Apply ``chain`` left to right."""
    for element in chain:
        env = element.apply(env)
    return env


def idealize(chain):
    """Replace every sinusoidal modulator by its quadratic limit."""
    return tuple(e.quadratic_limit() if isinstance(e, SinusoidalEom) else e for e in chain)


def chirp_factor(f_rf, amplitude):
    """Time-lens chirp ``K = 4 pi^2 f_rf^2 A`` [ps^-2] of a sinusoidal drive."""
    if not (f_rf > 0 and amplitude > 0) or not math.isfinite(f_rf * amplitude):
        raise DomainError("RF frequency and modulation depth must be positive")
    return 4.0 * math.pi**2 * f_rf**2 * amplitude


def collimation_gdd(k):
    """GDD [ps^2] satisfying the collimation condition ``phi = 1 / K``."""
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"chirp factor must be positive, got {k!r}")
    return 1.0 / k


def stretched_duration(fwhm_thz, phi):
    """Intensity FWHM [ps] of a transform-limited Gaussian after GDD ``phi``."""
    t0 = 2.0 * math.log(2.0) / (math.pi * fwhm_thz)
    return t0 * math.sqrt(1.0 + (4.0 * math.log(2.0) * phi / t0**2) ** 2)


def aperture_length(f_rf, amplitude, tol=0.5):
    """Length [ps] of the interval around an extremum where the sinusoid is parabolic.

    The aperture is where ``A |(1 - cos x) - x**2 / 2| <= tol`` with
    ``x = 2 pi f_rf t``. The residual grows monotonically with ``|x|``; if it
    stays below ``tol`` over the whole half period the aperture is one RF
    period.
    """
    if not (f_rf > 0 and amplitude > 0 and tol > 0):
        raise DomainError("aperture needs positive RF frequency, depth and tolerance")

    def residual(x):
        return amplitude * (0.5 * x * x - 1.0 + math.cos(x)) - tol

    if residual(math.pi) <= 0:
        x_edge = math.pi
    else:
        x_edge = brentq(residual, 1e-12, math.pi, xtol=1e-14, rtol=1e-14)
    return 2.0 * x_edge / (2.0 * math.pi * f_rf)


def aperture_fill_fraction(chirped_duration_fwhm, f_rf, amplitude, tol=0.5):
    """Ratio of the chirped-pulse intensity FWHM to the time-lens aperture."""
    if chirped_duration_fwhm < 0:
        raise DomainError("duration must be non-negative")
    return chirped_duration_fwhm / aperture_length(f_rf, amplitude, tol)


@functools.lru_cache(maxsize=None)
def focusing_sign():
    """Sign of the lens curvature that collimates a positive-GDD pulse.

    Determined once by propagating a test pulse through ``Gdd(+1 ps^2)`` and
    lenses of both signs on a small grid and keeping the narrower spectrum.
    """
    grid = TimeGrid(2048, 0.05)
    env = apply_gdd(synthesize_gaussian(grid, 2000.0, 2.0), 1.0)
    w = grid.detuning

    def rms_bandwidth(k):
        spec = np.abs(spectrum_array(apply_quadratic_lens(env, k).samples, grid)) ** 2
        mean = np.dot(spec, w) / spec.sum()
        return math.sqrt(np.dot(spec, (w - mean) ** 2) / spec.sum())

    return 1 if rms_bandwidth(1.0) < rms_bandwidth(-1.0) else -1
