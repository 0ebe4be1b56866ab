import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from timelens.elements import (
    Attenuator, GaussianFilter, Gdd, LinearShear, QuadraticLens, SinusoidalEom, apply_chain,
    focusing_sign,
)
from timelens.envelope import TimeGrid, spectral_fwhm, spectrum_array, synthesize_gaussian
from timelens.errors import DomainError, UnsupportedElementError
from timelens.gaussian import (
    GaussianPulse, JitterModel, compressed_bandwidth, compression_factor, jittered_bandwidth,
    jittered_spectrum, propagate,
)
from timelens.units import fwhm_to_width_param, wavelength_to_omega

W0 = float(wavelength_to_omega(830.0))
S = focusing_sign()


def test_identity_chain():
    p = GaussianPulse.from_fwhm(W0, 0.401)
    out = propagate(p, [Gdd(0.0), QuadraticLens(0.0)])
    assert out.p == pytest.approx(p.p)
    assert out.amplitude_scale == pytest.approx(p.amplitude_scale)
    assert p.energy == pytest.approx(1.0, rel=1e-14)


def test_collimated_and_diverging():
    p = GaussianPulse.from_fwhm(W0, 0.401)
    focus = propagate(p, [Gdd(1 / 0.101), QuadraticLens(S * 0.101)])
    assert focus.spectral_fwhm() == pytest.approx(0.0176890, rel=1e-5)
    diverge = propagate(p, [Gdd(1 / 0.101), QuadraticLens(-S * 0.101)])
    assert diverge.spectral_fwhm() == pytest.approx(0.802195, rel=1e-5)


def test_matches_fft_complex_spectrum():
    grid = TimeGrid(2**14, 0.02)
    chain = [Gdd(4.0), QuadraticLens(0.2), GaussianFilter(2.0), Attenuator(0.5), Gdd(-1.0)]
    env = apply_chain(synthesize_gaussian(grid, W0, 0.401), chain)
    analytic = propagate(GaussianPulse.from_fwhm(W0, 0.401), chain).spectrum(grid.detuning)
    numeric = spectrum_array(env.samples, grid)
    assert np.max(np.abs(numeric - analytic)) < 1e-9 * np.abs(analytic).max()


def test_unsupported_elements():
    p = GaussianPulse.from_fwhm(W0, 0.401)
    for element in [SinusoidalEom(25.7, 0.01), LinearShear(1.0, 0.01), QuadraticLens(0.1, 1.0),
                    GaussianFilter(1.0, W0 + 1.0)]:
        with pytest.raises(UnsupportedElementError):
            propagate(p, [element])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["gdd", "lens", "filter", "att"]), min_size=2, max_size=6),
       st.integers(1, 5), st.floats(-5.0, 5.0), st.floats(-0.5, 0.5))
def test_associativity(kinds, cut, phi, k):
    build = {"gdd": Gdd(phi), "lens": QuadraticLens(k), "filter": GaussianFilter(1.3),
             "att": Attenuator(0.7)}
    chain = [build[x] for x in kinds]
    cut = min(cut, len(chain))
    p = GaussianPulse.from_fwhm(W0, 0.3)
    whole = propagate(p, chain)
    split = propagate(propagate(p, chain[:cut]), chain[cut:])
    assert whole.p == pytest.approx(split.p, rel=1e-12, abs=1e-12)
    assert whole.amplitude_scale == pytest.approx(split.amplitude_scale, rel=1e-12)


def test_compressed_bandwidth_examples():
    assert compressed_bandwidth(0.401, 0.101) == pytest.approx(0.0176890, rel=1e-5)
    assert compressed_bandwidth(0.862, 0.4548) == pytest.approx(0.0370536, rel=1e-4)
    assert compressed_bandwidth(0.802, 0.101) == pytest.approx(0.5 * compressed_bandwidth(0.401, 0.101))
    with pytest.raises(DomainError):
        compressed_bandwidth(0.0, 0.1)


def test_compression_factor_examples():
    assert compression_factor(0.401, 0.101) == pytest.approx(22.6695, rel=1e-5)
    assert compression_factor(0.862, 0.4548) == pytest.approx(23.26, rel=1e-3)


@given(st.floats(0.01, 5.0), st.floats(0.001, 2.0))
def test_compression_identity(nu, k):
    assert compression_factor(nu, k) * compressed_bandwidth(nu, k) == pytest.approx(nu, rel=1e-12)


def test_jitter_model():
    assert JitterModel(0.5).std == pytest.approx(0.5 / math.sqrt(2))
    with pytest.raises(DomainError):
        JitterModel(-0.1)


def test_jittered_bandwidth_values():
    assert jittered_bandwidth(0.401, 0.101, 0.0) == compressed_bandwidth(0.401, 0.101)
    assert jittered_bandwidth(0.401, 0.101, 0.5) == pytest.approx(0.02218119, rel=1e-6)
    ts = np.linspace(0, 2, 20)
    assert np.all(np.diff([jittered_bandwidth(0.401, 0.101, t) for t in ts]) > 0)


def test_jittered_spectrum_reduces_and_normalizes():
    dw = fwhm_to_width_param(0.401)
    w = np.linspace(-0.5, 0.5, 20001)
    s0 = jittered_spectrum(dw, 0.101, 0.0, w)
    expected = math.pi**-0.5 * dw / 0.101 * np.exp(-(w / (0.101 / dw)) ** 2)
    assert np.max(np.abs(s0 - expected)) < 1e-12 * expected.max()
    s = jittered_spectrum(dw, 0.101, 0.5, w)
    assert np.sum(s) * (w[1] - w[0]) == pytest.approx(1.0, rel=1e-9)


def test_jittered_spectrum_is_convolution():
    dw, k, T = fwhm_to_width_param(0.401), 0.101, 0.5
    w = np.linspace(-1.0, 1.0, 4001)
    step = w[1] - w[0]
    s0 = jittered_spectrum(dw, k, 0.0, w)
    shifts = np.exp(-(w / (k * T)) ** 2)
    shifts /= shifts.sum()
    conv = np.convolve(s0, shifts, mode="same")
    direct = jittered_spectrum(dw, k, T, w)
    assert np.max(np.abs(conv - direct)) < 1e-10 * direct.max()
    assert np.sum(direct) * step == pytest.approx(1.0, rel=1e-9)


def test_pulse_validation():
    with pytest.raises(DomainError):
        GaussianPulse(W0, complex(-1.0, 0.0))
