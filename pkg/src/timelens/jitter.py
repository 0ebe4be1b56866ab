"""Monte Carlo averaging over RF-to-pulse timing offsets.

Each realization shifts the time reference of the single lens-type element in
a chain by an offset ``tau`` drawn from :class:`~timelens.gaussian.JitterModel`
and records the output spectral intensity; the average is incoherent.

Reproducibility: realizations are processed in fixed blocks of
:data:`BLOCK_SIZE`. Block ``j`` draws its offsets from a Philox generator
seeded with ``SeedSequence(seed, spawn_key=(j,))``, so a given realization
index always receives the same offset regardless of ``n_samples``, worker
count or scheduling order. Block statistics are merged in block order, which
makes the result bit-identical for any degree of parallelism.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .elements import LENS_TYPES, SPECTRAL_TYPES, Attenuator, GaussianFilter, apply_chain
from .envelope import (
    SampledEnvelope, centroid, expi, intensity_fwhm_thz, spectrum_array,
)
from .errors import ConfigError, DomainError
from .gaussian import JitterModel

BLOCK_SIZE = 256


@dataclass(frozen=True)
class McConfig:
    n_samples: int
    seed: int
    jitter: JitterModel

    def __post_init__(self):
        if int(self.n_samples) < 1:
            raise DomainError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class McSpectrum:
    """Jitter-averaged spectral intensity with per-bin standard error."""

    carrier: float
    detuning: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_samples: int

    @property
    def domega(self):
        return float(self.detuning[1] - self.detuning[0])

    @property
    def energy(self):
        return float(self.mean.sum() * self.domega)

    def fwhm(self, refine=8):
        """Intensity FWHM [THz]."""
        return intensity_fwhm_thz(self.mean, self.domega, refine)


def block_offsets(cfg, block, size):
    """Timing offsets [ps] for realization block ``block``."""
    ss = np.random.SeedSequence(int(cfg.seed), spawn_key=(block,))
    rng = np.random.Generator(np.random.Philox(ss))
    return rng.normal(0.0, cfg.jitter.std, size)


def draw_offsets(cfg):
    """All ``cfg.n_samples`` offsets in realization order."""
    return np.concatenate([block_offsets(cfg, j, size) for j, size in _blocks(cfg.n_samples)])


def _blocks(n):
    n_blocks = -(-n // BLOCK_SIZE)
    return [(j, min(BLOCK_SIZE, n - j * BLOCK_SIZE)) for j in range(n_blocks)]


def _split_chain(chain):
    idx = [i for i, e in enumerate(chain) if isinstance(e, LENS_TYPES)]
    if len(idx) != 1:
        raise ConfigError(
            f"jitter averaging needs exactly one lens-type element, found {len(idx)}")
    i = idx[0]
    return tuple(chain[:i]), chain[i], tuple(chain[i + 1:])


class _Realizer:
    """Evaluates output spectral intensities for batches of lens offsets.

    On the fast path (only frequency-diagonal elements after the lens) rows are
    returned unscaled and in FFT order; :meth:`finish` applies the transform
    normalization, the post-lens power gain and the shift to ascending
    detuning. Both are linear, so they commute with averaging.
    """

    def __init__(self, env, chain):
        pre, self.lens, self.post = _split_chain(chain)
        self.env = apply_chain(env, pre)
        self.grid = self.env.grid
        self.tbar = self.env.t - centroid(self.env)
        self.fast = all(isinstance(e, SPECTRAL_TYPES) for e in self.post)
        omega = self.env.carrier + self.grid.detuning
        gain = np.full(self.grid.n_samples, (self.grid.span) ** 2 / (2.0 * np.pi))
        for e in self.post:
            if isinstance(e, GaussianFilter):
                gain = gain * e.amplitude(omega, self.env.carrier) ** 2
            elif isinstance(e, Attenuator):
                gain = gain * e.eta
        self.scale = np.fft.ifftshift(gain)

    def raw(self, taus):
        phases = self.lens.phase(self.tbar[None, :] - taus[:, None])
        fields = expi(phases)
        fields *= self.env.samples
        if self.fast:
            spec = np.fft.ifft(fields, axis=-1)
            return spec.real**2 + spec.imag**2
        rows = []
        for row in fields:
            out = apply_chain(self.env.replace(row), self.post)
            rows.append(np.fft.ifftshift(np.abs(spectrum_array(out.samples, self.grid)) ** 2))
        return np.array(rows)

    def finish(self, values, power=1):
        """Scale and reorder raw rows (``power=2`` for squared deviations)."""
        if self.fast:
            values = values * self.scale**power
        return np.fft.fftshift(values, axes=-1)

    def intensities(self, taus):
        return self.finish(self.raw(taus))


def _map_blocks(func, cfg, workers):
    blocks = _blocks(int(cfg.n_samples))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, blocks))
    return [func(b) for b in blocks]


def averaged_spectrum(env: SampledEnvelope, chain, cfg: McConfig, workers: int = 1) -> McSpectrum:
    """Mean output spectral intensity over ``cfg.n_samples`` timing offsets.

    Raises
    ------
    ConfigError
        If the chain does not contain exactly one lens-type element.
    """
    realizer = _Realizer(env, chain)
    detuning = realizer.grid.detuning
    n = int(cfg.n_samples)
    if cfg.jitter.T == 0:
        single = realizer.intensities(np.zeros(1))[0]
        return McSpectrum(env.carrier, detuning, single, np.zeros_like(single), n)

    def block_stats(block):
        j, size = block
        values = realizer.raw(block_offsets(cfg, j, size))
        mean = values.mean(axis=0)
        values -= mean
        values *= values
        return size, mean, values.sum(axis=0)

    count, mean, m2 = 0, 0.0, 0.0
    for size, b_mean, b_m2 in _map_blocks(block_stats, cfg, workers):
        # pairwise merge of mean and sum of squared deviations
        total = count + size
        delta = b_mean - mean
        mean = mean + delta * (size / total)
        m2 = m2 + b_m2 + delta**2 * (count * size / total)
        count = total
    mean = realizer.finish(mean)
    m2 = realizer.finish(m2, power=2)
    if n > 1:
        stderr = np.sqrt(m2 / (n - 1) / n)
    else:
        stderr = np.full_like(mean, np.nan)
    return McSpectrum(env.carrier, detuning, mean, stderr, n)


def drift_series(env, chain, jitter, n_steps, seed, workers=1):
    """Spectral centroid [rad/ps, absolute] of each of ``n_steps`` realizations."""
    cfg = McConfig(n_steps, seed, jitter)
    realizer = _Realizer(env, chain)
    w = realizer.grid.detuning

    def block_centroids(block):
        j, size = block
        values = realizer.intensities(block_offsets(cfg, j, size))
        return env.carrier + values @ w / values.sum(axis=1)

    return np.concatenate(_map_blocks(block_centroids, cfg, workers))


def standard_error_of_mean(values):
    values = np.asarray(values, dtype=float)
    return float(values.std(ddof=1) / math.sqrt(values.size))
