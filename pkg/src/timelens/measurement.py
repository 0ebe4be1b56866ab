"""Spectrometer emulation: instrument-response blur and photon-count noise.

Spectra are handled on a uniform angular-frequency detuning grid. Wavelength
axes are a relabeling of that grid (see :attr:`timelens.envelope.SampledSpectrum.wavelength`),
which is accurate for the sub-percent fractional spans of interest.

Tabulated response files hold two whitespace-separated columns, detuning
[rad/ps] and relative response, with ``#`` starting a comment line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .envelope import measure_fwhm
from .errors import ConfigError, DomainError
from .units import bandwidth_nm_to_thz

_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


@dataclass(frozen=True, eq=False)
class InstrumentResponse:
    """Spectrometer response, either Gaussian or tabulated over detuning.

    Use :meth:`gaussian` or :meth:`from_file` to construct.
    """

    kind: str
    fwhm_thz: float
    detuning: np.ndarray | None = None
    response: np.ndarray | None = None

    @classmethod
    def gaussian(cls, fwhm_thz=None, fwhm_nm=None, wavelength_nm=None):
        """Gaussian response of intensity FWHM given in THz, or in nm at ``wavelength_nm``."""
        if (fwhm_thz is None) == (fwhm_nm is None):
            raise DomainError("give exactly one of fwhm_thz and fwhm_nm")
        if fwhm_nm is not None:
            if wavelength_nm is None:
                raise DomainError("a wavelength is needed to convert an IRF width in nm")
            fwhm_thz = bandwidth_nm_to_thz(fwhm_nm, wavelength_nm)
        fwhm_thz = float(fwhm_thz)
        if not (math.isfinite(fwhm_thz) and fwhm_thz > 0):
            raise DomainError(f"IRF FWHM must be positive, got {fwhm_thz!r}")
        return cls("gaussian", fwhm_thz)

    @classmethod
    def tabulated(cls, detuning, response):
        x = np.asarray(detuning, dtype=float)
        y = np.asarray(response, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 3:
            raise ConfigError("tabulated IRF needs two equal-length columns of >= 3 rows")
        if np.any(np.diff(x) <= 0):
            raise ConfigError("tabulated IRF detuning must increase strictly")
        if np.any(y < 0) or not np.all(np.isfinite(y)) or y.max() == 0:
            raise ConfigError("tabulated IRF response must be finite, non-negative and non-zero")
        step = np.min(np.diff(x))
        fine = np.arange(x[0], x[-1] + 0.5 * step, step)
        fwhm = measure_fwhm(np.interp(fine, x, y), step) / (2.0 * math.pi)
        x.flags.writeable = False
        y.flags.writeable = False
        return cls("tabulated", fwhm, x, y)

    @classmethod
    def from_file(cls, path):
        """Load a two-column tabulated response (detuning [rad/ps], response)."""
        path = Path(path)
        try:
            data = np.loadtxt(path, comments="#", ndmin=2)
        except OSError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if data.shape[1] != 2:
            raise ConfigError(f"{path}: expected 2 columns, found {data.shape[1]}")
        return cls.tabulated(data[:, 0], data[:, 1])

    def kernel(self, n, domega):
        """Unit-sum kernel on ``n`` points of spacing ``domega``, centred at index ``n // 2``."""
        w = (np.arange(n) - n // 2) * domega
        if self.kind == "gaussian":
            sigma = 2.0 * math.pi * self.fwhm_thz * _FWHM_TO_SIGMA
            k = np.exp(-0.5 * (w / sigma) ** 2)
        else:
            k = np.interp(w, self.detuning, self.response, left=0.0, right=0.0)
        total = k.sum()
        if total == 0:
            raise ConfigError("IRF kernel vanishes on this grid")
        return k / total


def convolve_irf(intensity, domega, irf):
    """Blur a spectral intensity with an instrument response.

    Circular convolution via FFT with a unit-sum kernel, so the total intensity
    is preserved to rounding error and the operation commutes with cyclic
    translation.

    Parameters
    ----------
    intensity : array_like
        Spectral intensity on a uniform detuning grid.
    domega : float
        Grid spacing [rad/ps].
    irf : InstrumentResponse

    Raises
    ------
    ConfigError
        If the grid spacing exceeds a quarter of the IRF FWHM.
    """
    y = np.asarray(intensity, dtype=float)
    fwhm_w = 2.0 * math.pi * irf.fwhm_thz
    if domega > fwhm_w / 4.0:
        raise ConfigError(
            f"spectral grid spacing {domega:.4g} rad/ps is coarser than a quarter of "
            f"the IRF FWHM ({fwhm_w:.4g} rad/ps); enlarge the time window")
    n = y.size
    k = np.fft.ifftshift(irf.kernel(n, domega))
    out = np.fft.irfft(np.fft.rfft(y) * np.fft.rfft(k), n)
    return out


def poissonize(intensity, total_counts, seed):
    """Independent Poisson counts per bin with means summing to ``total_counts``.

    ``seed`` is anything :class:`numpy.random.SeedSequence` accepts, e.g. an
    integer or a tuple of integers for independent streams under one seed.
    """
    total_counts = int(total_counts)
    if total_counts < 0:
        raise DomainError("total_counts must be >= 0")
    y = np.clip(np.asarray(intensity, dtype=float), 0.0, None)
    if total_counts == 0:
        return np.zeros(y.shape, dtype=np.int64)
    s = y.sum()
    if s == 0:
        raise DomainError("cannot draw counts from an all-zero spectrum")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return rng.poisson(total_counts * y / s).astype(np.int64)
