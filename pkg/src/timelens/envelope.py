"""Sampled complex envelopes and their Fourier pair.

Fourier convention (the sign every quadratic phase in :mod:`timelens.elements`
is defined against)::

    psi(t)  = (2 pi)^(-1/2) ∫ spec(w) exp(-i w t) dw
    spec(w) = (2 pi)^(-1/2) ∫ psi(t) exp(+i w t) dt

``w`` is the detuning from the carrier. The symmetric prefactor makes the
discrete transform unitary, so ``sum |spec|^2 dw == sum |psi|^2 dt`` holds to
rounding error and a unit-energy envelope has a spectral intensity that
integrates to one over angular frequency.

With ``t_k = t_first + k dt`` and ``w_n = 2 pi m_n / (N dt)`` the Riemann sum
becomes ``spec_n = N dt / sqrt(2 pi) * exp(i w_n t_first) * ifft(psi)_n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguityError, DomainError, GridError, NumericalError
from .units import omega_to_wavelength

#: boundary samples must stay below this fraction of the peak amplitude
GUARD_LEVEL = 1e-6

DEFAULT_N_SAMPLES = 2**14
DEFAULT_DT = 0.02


def expi(phase):
    """``exp(1j * phase)`` for real ``phase``, built from cos and sin.

    Several times faster than the complex exponential ufunc.
    """
    phase = np.asarray(phase, dtype=float)
    out = np.empty(phase.shape, dtype=complex)
    np.cos(phase, out=out.real)
    np.sin(phase, out=out.imag)
    return out


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid ``t_i = t_center + (i - n/2) dt`` [ps]."""

    n_samples: int = DEFAULT_N_SAMPLES
    dt: float = DEFAULT_DT
    t_center: float = 0.0

    def __post_init__(self):
        n = self.n_samples
        if not isinstance(n, (int, np.integer)) or n < 2**10 or n & (n - 1):
            raise GridError(f"n_samples must be a power of two >= 1024, got {n!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise GridError(f"dt must be positive and finite, got {self.dt!r}")
        if not math.isfinite(self.t_center):
            raise GridError("t_center must be finite")

    @property
    def span(self):
        return self.n_samples * self.dt

    @property
    def domega(self):
        """Angular-frequency spacing of the paired spectral grid [rad/ps]."""
        return 2.0 * math.pi / self.span

    @property
    def t(self):
        n = self.n_samples
        return self.t_center + (np.arange(n) - n // 2) * self.dt

    @property
    def detuning(self):
        """Ascending detuning axis [rad/ps] of :class:`SampledSpectrum` arrays."""
        n = self.n_samples
        return (np.arange(n) - n // 2) * self.domega

    def _fft_phase(self):
        # exp(i w_n t_first) in FFT ordering
        w = 2.0 * math.pi * np.fft.fftfreq(self.n_samples, self.dt)
        return expi(w * self.t[0])


@dataclass(frozen=True, eq=False)
class SampledEnvelope:
    """Complex envelope ``psi(t_i)`` in the frame rotating at ``carrier``.

    Instances are immutable; the sample array is flagged read-only.
    ``warnings`` carries non-fatal remarks from the elements that produced it.
    """

    grid: TimeGrid
    carrier: float
    samples: np.ndarray
    warnings: tuple = field(default=())

    def __post_init__(self):
        arr = np.array(self.samples, dtype=complex)
        if arr.shape != (self.grid.n_samples,):
            raise GridError(
                f"sample array of shape {arr.shape} does not match grid of "
                f"{self.grid.n_samples} points")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def t(self):
        return self.grid.t

    @property
    def intensity(self):
        return np.abs(self.samples) ** 2

    def replace(self, samples, warning=None):
        """New envelope on the same grid and carrier."""
        warnings = self.warnings + ((warning,) if warning else ())
        return SampledEnvelope(self.grid, self.carrier, samples, warnings)


@dataclass(frozen=True, eq=False)
class SampledSpectrum:
    """Spectral amplitudes over the ascending detuning axis of ``grid``."""

    grid: TimeGrid
    carrier: float
    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.array(self.amplitudes, dtype=complex)
        if arr.shape != (self.grid.n_samples,):
            raise GridError("spectral array does not match the grid")
        arr.flags.writeable = False
        object.__setattr__(self, "amplitudes", arr)

    @property
    def domega(self):
        return self.grid.domega

    @property
    def detuning(self):
        return self.grid.detuning

    @property
    def omega(self):
        return self.carrier + self.grid.detuning

    @property
    def wavelength(self):
        return omega_to_wavelength(self.omega)

    @property
    def intensity(self):
        return np.abs(self.amplitudes) ** 2


def spectrum_array(samples, grid):
    """Spectral amplitudes (ascending detuning) for samples along the last axis."""
    n, dt = grid.n_samples, grid.dt
    spec = np.fft.ifft(samples, axis=-1)
    spec *= n * dt / math.sqrt(2.0 * math.pi)
    spec *= grid._fft_phase()
    return np.fft.fftshift(spec, axes=-1)


def time_array(amplitudes, grid):
    """Inverse of :func:`spectrum_array`."""
    n, dt = grid.n_samples, grid.dt
    spec = np.fft.ifftshift(amplitudes, axes=-1) * np.conj(grid._fft_phase())
    psi = np.fft.fft(spec, axis=-1)
    psi *= math.sqrt(2.0 * math.pi) / (n * dt)
    return psi


def to_spectrum(env):
    return SampledSpectrum(env.grid, env.carrier, spectrum_array(env.samples, env.grid))


def to_time(spec, warnings=()):
    return SampledEnvelope(spec.grid, spec.carrier, time_array(spec.amplitudes, spec.grid),
                           tuple(warnings))


def edge_ratio(values):
    """Largest edge magnitude relative to the peak magnitude."""
    mag = np.abs(values)
    peak = mag.max()
    if peak == 0:
        raise DomainError("field is identically zero")
    w = max(2, mag.shape[-1] // 256)
    return float(max(mag[:w].max(), mag[-w:].max()) / peak)


def check_guard(env, context="envelope"):
    """Raise :class:`GridError` if the field reaches the time-window edges."""
    ratio = edge_ratio(env.samples)
    if ratio >= GUARD_LEVEL:
        raise GridError(
            f"{context}: boundary amplitude is {ratio:.3g} of the peak "
            f"(limit {GUARD_LEVEL:g}); the time window of {env.grid.span:g} ps "
            f"is too short")
    return env


def check_spectral_guard(env, context="envelope"):
    """Raise :class:`GridError` if the spectrum reaches the Nyquist edges."""
    ratio = edge_ratio(spectrum_array(env.samples, env.grid))
    if ratio >= GUARD_LEVEL:
        raise GridError(
            f"{context}: spectral edge amplitude is {ratio:.3g} of the peak "
            f"(limit {GUARD_LEVEL:g}); dt = {env.grid.dt:g} ps is too coarse")
    return env


def transform_limited_duration(fwhm_thz):
    """Intensity FWHM [ps] of a transform-limited Gaussian of spectral FWHM ``fwhm_thz``."""
    return 2.0 * math.log(2.0) / (math.pi * fwhm_thz)


def synthesize_gaussian(grid, omega0, fwhm_thz, t0=0.0):
    """Unit-energy transform-limited Gaussian with spectral intensity FWHM ``fwhm_thz``.

    Parameters
    ----------
    grid : TimeGrid
    omega0 : float
        Carrier angular frequency [rad/ps].
    fwhm_thz : float
        Spectral intensity FWHM in ordinary frequency [THz].
    t0 : float
        Temporal peak position [ps].
    """
    if not (math.isfinite(fwhm_thz) and fwhm_thz > 0):
        raise DomainError(f"bandwidth must be positive, got {fwhm_thz!r}")
    if not (math.isfinite(omega0) and omega0 > 0):
        raise DomainError(f"carrier must be positive, got {omega0!r}")
    duration = transform_limited_duration(fwhm_thz)
    ratio = grid.span / duration
    if ratio < 8:
        raise GridError(f"time window spans {ratio:.3g} pulse durations (need >= 8)")
    bins = fwhm_thz * grid.span
    if bins < 4:
        raise GridError(f"only {bins:.3g} frequency bins across the FWHM (need >= 4)")
    dw = math.pi * fwhm_thz / math.sqrt(math.log(2.0))
    t = grid.t - t0
    samples = np.exp(-0.5 * (dw * t) ** 2).astype(complex)
    samples /= math.sqrt(grid.dt * np.sum(np.abs(samples) ** 2))
    env = SampledEnvelope(grid, float(omega0), samples)
    check_guard(env, "synthesized pulse")
    check_spectral_guard(env, "synthesized pulse")
    return env


def energy(env):
    """``∫|psi|^2 dt`` as a discrete sum."""
    return float(np.sum(np.abs(env.samples) ** 2) * env.grid.dt)


def spectral_energy(spec):
    return float(np.sum(np.abs(spec.amplitudes) ** 2) * spec.domega)


def centroid(env):
    """Intensity-weighted mean time [ps]."""
    w = env.intensity
    total = w.sum()
    if total == 0:
        raise DomainError("centroid of a zero-energy envelope")
    return float(np.dot(w, env.t) / total)


def rms_duration(env):
    """Intensity-weighted standard deviation of time [ps]."""
    w = env.intensity
    total = w.sum()
    if total == 0:
        raise DomainError("duration of a zero-energy envelope")
    tc = np.dot(w, env.t) / total
    return float(math.sqrt(np.dot(w, (env.t - tc) ** 2) / total))


def spectral_centroid(spec):
    """Intensity-weighted mean absolute angular frequency [rad/ps]."""
    if isinstance(spec, SampledEnvelope):
        spec = to_spectrum(spec)
    w = spec.intensity
    total = w.sum()
    if total == 0:
        raise DomainError("spectral centroid of a zero-energy spectrum")
    return float(spec.carrier + np.dot(w, spec.detuning) / total)


def measure_fwhm(intensity, spacing=1.0):
    """Full width at half maximum of a single-peaked sampled profile.

    The two half-maximum crossings adjacent to the global peak are located by
    linear interpolation between neighbouring samples.

    Raises
    ------
    NumericalError
        If the peak sits on the array boundary or a crossing is missing.
    AmbiguityError
        If any sample outside the main lobe reaches half maximum.
    """
    y = np.asarray(intensity, dtype=float)
    if y.ndim != 1 or y.size < 3:
        raise DomainError("intensity must be a 1-D array of at least 3 samples")
    if y.min() < -1e-6 * y.max():
        raise DomainError("intensity must be non-negative")
    i_peak = int(np.argmax(y))
    if i_peak == 0 or i_peak == y.size - 1:
        raise NumericalError(f"peak at array boundary (index {i_peak})")
    half = 0.5 * y[i_peak]
    above = y >= half
    left = i_peak
    while left > 0 and above[left - 1]:
        left -= 1
    right = i_peak
    while right < y.size - 1 and above[right + 1]:
        right += 1
    if left == 0 or right == y.size - 1:
        raise NumericalError("half-maximum crossing lies outside the array")

    def cross(i, j):
        # crossing between sample i (below) and j (above)
        return i + (half - y[i]) / (y[j] - y[i]) * (j - i)

    x_left = cross(left - 1, left)
    x_right = cross(right + 1, right)
    outside = above.copy()
    outside[left:right + 1] = False
    if outside.any():
        edges = np.flatnonzero(np.diff(above.astype(np.int8)))
        positions = [float(e + (half - y[e]) / (y[e + 1] - y[e])) * spacing for e in edges]
        raise AmbiguityError(
            "multiple disconnected half-maximum crossings at positions "
            + ", ".join(f"{p:.6g}" for p in positions))
    return float((x_right - x_left) * spacing)


def upsample_intensity(intensity, factor):
    """Band-limited refinement of a spectral intensity by an integer ``factor``.

    The intensity spectrum of a field that occupies less than half the time
    window is exactly determined by its samples; its inverse transform (the
    field autocorrelation) is zero-padded and transformed back. Original
    samples are reproduced and sample ``k * factor`` of the output lands on
    input sample ``k``.

    Raises
    ------
    GridError
        If the autocorrelation does not vanish at large lags, i.e. the field
        fills more than half the window and refinement would be inexact.
    """
    y = np.asarray(intensity, dtype=float)
    factor = int(factor)
    if factor < 1:
        raise DomainError("refinement factor must be >= 1")
    n = y.size
    if factor == 1:
        return y.copy()
    acf = np.fft.ifft(np.fft.ifftshift(y))
    mid = slice(3 * n // 8, 5 * n // 8)
    leak = np.abs(acf[mid]).max() / np.abs(acf[0])
    if leak > 1e-6:
        raise GridError(
            f"field autocorrelation does not vanish at large lags ({leak:.3g}); "
            "the time window must be at least twice the field extent to refine")
    padded = np.zeros(n * factor, dtype=complex)
    padded[: n // 2] = acf[: n // 2]
    padded[-(n // 2):] = acf[-(n // 2):]
    return np.fft.fftshift(np.fft.fft(padded)).real


def spectral_fwhm(env, refine=8):
    """Spectral intensity FWHM [THz] of an envelope, measured on a refined axis."""
    intensity = np.abs(spectrum_array(env.samples, env.grid)) ** 2
    return intensity_fwhm_thz(intensity, env.grid.domega, refine)


def intensity_fwhm_thz(intensity, domega, refine=8):
    """FWHM [THz] of a spectral intensity sampled at spacing ``domega`` [rad/ps].

    Falls back to the raw samples when the field is too long to refine.
    """
    try:
        fine = upsample_intensity(intensity, refine)
        step = domega / refine
    except GridError:
        fine, step = np.asarray(intensity, dtype=float), domega
    return measure_fwhm(fine, step) / (2.0 * math.pi)


def temporal_fwhm(env):
    """Temporal intensity FWHM [ps]."""
    return measure_fwhm(env.intensity, env.grid.dt)
