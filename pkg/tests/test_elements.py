import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from timelens.elements import (
    Attenuator, GaussianFilter, Gdd, LinearShear, QuadraticLens, SinusoidalEom, apply_chain,
    aperture_fill_fraction, aperture_length, chirp_factor, collimation_gdd, focusing_sign, idealize,
    stretched_duration,
)
from timelens.envelope import (
    TimeGrid, energy, spectral_centroid, spectral_fwhm, synthesize_gaussian, temporal_fwhm,
    to_spectrum,
)
from timelens.errors import DomainError, GridError
from timelens.units import fwhm_to_width_param, omega_shift_to_nm, wavelength_to_omega

W0 = float(wavelength_to_omega(830.0))
K10 = chirp_factor(0.01, 25.7)


@pytest.fixture(scope="module")
def grid():
    return TimeGrid(2**14, 0.02)


@pytest.fixture(scope="module")
def pulse(grid):
    return synthesize_gaussian(grid, W0, 0.401)


def _rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


def test_chirp_factor_and_collimation():
    assert K10 == pytest.approx(0.1014595, rel=1e-6)
    assert collimation_gdd(0.101) == pytest.approx(9.90099, rel=1e-5)
    k40 = chirp_factor(0.04, 7.2)
    assert k40 == pytest.approx(0.4547914, rel=1e-6)
    assert collimation_gdd(k40) == pytest.approx(2.19881, rel=1e-5)
    with pytest.raises(DomainError):
        chirp_factor(0.0, 25.7)
    with pytest.raises(DomainError):
        chirp_factor(0.01, -1.0)
    with pytest.raises(DomainError):
        collimation_gdd(0.0)


def test_gdd_identity_and_spectral_intensity(pulse):
    assert Gdd(0.0).apply(pulse) is pulse
    out = Gdd(9.9).apply(pulse)
    assert _rel(to_spectrum(out).intensity, to_spectrum(pulse).intensity) < 1e-12


def test_gdd_stretch_matches_gaussian_formula(pulse):
    out = Gdd(9.9).apply(pulse)
    assert temporal_fwhm(out) == pytest.approx(stretched_duration(0.401, 9.9), rel=1e-3)


def test_gdd_wraparound_guard():
    env = synthesize_gaussian(TimeGrid(1024, 0.05), W0, 0.401)
    with pytest.raises(GridError, match="too short"):
        Gdd(20.0).apply(env)


def test_lens_identity_and_temporal_intensity(pulse):
    assert QuadraticLens(0.0).apply(pulse) is pulse
    out = QuadraticLens(0.3).apply(Gdd(2.0).apply(pulse))
    assert _rel(out.intensity, Gdd(2.0).apply(pulse).intensity) < 1e-12


def test_focusing_sign_is_locked():
    assert focusing_sign() in (1, -1)
    assert SinusoidalEom(25.7, 0.01).chirp == pytest.approx(focusing_sign() * K10)
    assert SinusoidalEom(25.7, 0.01, sign="diverging").chirp == pytest.approx(-focusing_sign() * K10)


def test_collimated_chain_compresses(pulse):
    out = apply_chain(pulse, [Gdd(1 / 0.101), QuadraticLens(0.101)])
    assert spectral_fwhm(out) == pytest.approx(0.017689, rel=1e-2)


def test_sinusoid_zero_depth_is_identity(pulse):
    assert SinusoidalEom(0.0, 0.01).apply(pulse) is pulse


@pytest.mark.parametrize("phi", [0.5, 1.0, 2.0])
def test_sinusoid_quadratic_limit(pulse, phi):
    # short, weakly chirped pulse sits well inside the aperture
    env = Gdd(phi).apply(pulse)
    eom = SinusoidalEom(25.7, 0.01)
    ideal = spectral_fwhm(eom.quadratic_limit().apply(env))
    assert spectral_fwhm(eom.apply(env)) == pytest.approx(ideal, rel=1e-2)


def test_sinusoid_aberration_at_full_aperture(pulse):
    chain = [Gdd(1 / K10), SinusoidalEom(25.7, 0.01)]
    fill = aperture_fill_fraction(temporal_fwhm(Gdd(1 / K10).apply(pulse)), 0.01, 25.7)
    assert 0.85 < fill < 1.05
    real = spectral_fwhm(apply_chain(pulse, chain))
    ideal = spectral_fwhm(apply_chain(pulse, idealize(chain)))
    assert real > 1.5 * ideal


def test_sinusoid_converges_as_fill_shrinks(grid):
    diffs, fills = [], []
    for nu in [0.45, 0.4, 0.3, 0.2, 0.1]:
        env = synthesize_gaussian(grid, W0, nu)
        chain = [Gdd(1 / K10), SinusoidalEom(25.7, 0.01)]
        real = spectral_fwhm(apply_chain(env, chain))
        ideal = spectral_fwhm(apply_chain(env, idealize(chain)))
        diffs.append(abs(real / ideal - 1))
        fills.append(aperture_fill_fraction(temporal_fwhm(Gdd(1 / K10).apply(env)), 0.01, 25.7))
    assert all(np.diff(fills) < 0)
    assert all(np.diff(diffs) < 0)


def test_sinusoid_validation():
    with pytest.raises(DomainError):
        SinusoidalEom(-1.0, 0.01)
    with pytest.raises(DomainError):
        SinusoidalEom(1.0, 0.0)
    with pytest.raises(DomainError):
        SinusoidalEom(1.0, 0.01, sign="sideways")


def test_linear_shear_shift(pulse):
    up = LinearShear(25.7, 0.01, "up").apply(pulse)
    down = LinearShear(25.7, 0.01, "down").apply(pulse)
    expected = 2 * math.pi * 25.7 * 0.01
    assert expected == pytest.approx(1.614779, rel=1e-6)
    assert spectral_centroid(up) - W0 == pytest.approx(expected, rel=1e-3)
    assert spectral_centroid(down) - W0 == pytest.approx(-expected, rel=1e-3)
    assert omega_shift_to_nm(spectral_centroid(up) - W0, 830.0) == pytest.approx(0.59, rel=2e-3)
    assert up.warnings == ()


def test_linear_shear_warns_for_long_pulse(pulse):
    out = LinearShear(25.7, 0.01).apply(Gdd(9.9).apply(pulse))
    assert any("linear shear" in w for w in out.warnings)


def test_filter_identity_and_energy(pulse):
    assert GaussianFilter(math.inf).apply(pulse) is pulse
    dw, dwf = fwhm_to_width_param(0.401), fwhm_to_width_param(0.057)
    out = GaussianFilter(dwf).apply(pulse)
    assert energy(out) == pytest.approx((1 + (dw / dwf) ** 2) ** -0.5, rel=1e-10)
    far = GaussianFilter(dwf, center=W0 + 20 * dw).apply(pulse)
    assert energy(far) < 1e-8
    with pytest.raises(DomainError):
        GaussianFilter(0.0).apply(pulse)


def test_attenuator(pulse):
    assert energy(Attenuator(0.27).apply(pulse)) == pytest.approx(0.27, rel=1e-12)
    with pytest.raises(DomainError):
        Attenuator(0.0)
    with pytest.raises(DomainError):
        Attenuator(1.5)


def test_phase_only_elements_conserve_energy(pulse):
    env = Gdd(3.0).apply(pulse)
    for element in [Gdd(-2.0), QuadraticLens(0.2), SinusoidalEom(25.7, 0.01, 3.0),
                    SinusoidalEom(7.2, 0.04, sign="diverging"), LinearShear(5.0, 0.01)]:
        assert energy(element.apply(env)) == pytest.approx(energy(env), rel=1e-12)


def test_gdd_commutes_with_filter(pulse):
    f, d = GaussianFilter(0.8, W0 + 0.3), Gdd(4.0)
    a = apply_chain(pulse, [f, d]).samples
    b = apply_chain(pulse, [d, f]).samples
    assert _rel(a, b) < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(-10.0, 10.0))
def test_inverse_pairs(k, phi):
    env = synthesize_gaussian(TimeGrid(2**14, 0.02), W0, 0.401)
    env = Gdd(2.0).apply(env)
    lens = apply_chain(env, [QuadraticLens(k), QuadraticLens(-k)])
    assert _rel(lens.samples, env.samples) < 1e-12
    gdd = apply_chain(env, [Gdd(phi), Gdd(-phi)])
    assert _rel(gdd.samples, env.samples) < 1e-12


def test_aperture_length_oracle():
    assert aperture_length(0.01, 25.7, 0.5) == pytest.approx(26.4644, rel=1e-4)
    # shallow drive: residual stays below tolerance over the half period
    assert aperture_length(0.01, 0.05, 0.5) == pytest.approx(100.0)
    with pytest.raises(DomainError):
        aperture_length(0.01, 25.7, 0.0)


def test_aperture_fill_scaling():
    assert aperture_fill_fraction(0.0, 0.01, 25.7) == 0.0
    a = aperture_fill_fraction(10.0, 0.01, 25.7)
    assert aperture_fill_fraction(20.0, 0.01, 25.7) == pytest.approx(2 * a, rel=1e-14)


def test_idealize_keeps_other_elements():
    chain = (Gdd(1.0), SinusoidalEom(25.7, 0.01, 0.5), Attenuator(0.5))
    ideal = idealize(chain)
    assert ideal[0] is chain[0] and ideal[2] is chain[2]
    assert ideal[1] == QuadraticLens(chain[1].chirp, 0.5)
