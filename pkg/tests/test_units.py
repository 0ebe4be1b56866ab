import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from timelens.errors import DomainError
from timelens.units import (
    C_NM_PER_PS, bandwidth_nm_to_thz, bandwidth_thz_to_nm, fwhm_to_width_param, ghz,
    omega_shift_to_nm, omega_to_wavelength, wavelength_to_omega, width_param_to_fwhm,
)

wavelengths = st.floats(200.0, 5000.0)
bandwidths = st.floats(1e-4, 50.0)


def test_omega_at_830nm():
    assert wavelength_to_omega(830.0) == pytest.approx(2269.4597, rel=1e-7)


def test_half_wavelength_doubles_omega():
    assert wavelength_to_omega(415.0) == pytest.approx(2 * wavelength_to_omega(830.0), rel=1e-15)


@given(wavelengths)
def test_wavelength_round_trip(lam):
    assert omega_to_wavelength(wavelength_to_omega(lam)) == pytest.approx(lam, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_wavelength_domain(bad):
    with pytest.raises(DomainError):
        wavelength_to_omega(bad)


def test_bandwidth_examples():
    assert bandwidth_nm_to_thz(0.92, 830.0) == pytest.approx(0.40036, rel=1e-4)
    assert bandwidth_nm_to_thz(0.07, 830.0) == pytest.approx(0.030462, rel=1e-4)
    assert bandwidth_nm_to_thz(0.0, 830.0) == 0.0


def test_bandwidth_domain():
    with pytest.raises(DomainError):
        bandwidth_nm_to_thz(math.nan, 830.0)
    with pytest.raises(DomainError):
        bandwidth_nm_to_thz(-0.1, 830.0)
    with pytest.raises(DomainError):
        bandwidth_nm_to_thz(0.1, 0.0)


@given(bandwidths, wavelengths)
def test_bandwidth_round_trip_and_scaling(dl, lam):
    nu = bandwidth_nm_to_thz(dl, lam)
    assert bandwidth_thz_to_nm(nu, lam) == pytest.approx(dl, rel=1e-12)
    assert bandwidth_nm_to_thz(2 * dl, lam) == pytest.approx(2 * nu, rel=1e-12)
    assert bandwidth_nm_to_thz(dl, 2 * lam) == pytest.approx(nu / 4, rel=1e-12)


def test_width_param_examples():
    assert fwhm_to_width_param(0.401) == pytest.approx(1.513148, rel=1e-6)
    assert fwhm_to_width_param(0.057) == pytest.approx(0.215086, rel=1e-5)


@given(bandwidths)
def test_width_param_round_trip(nu):
    assert width_param_to_fwhm(fwhm_to_width_param(nu)) == pytest.approx(nu, rel=1e-12)


def test_width_param_domain():
    with pytest.raises(DomainError):
        fwhm_to_width_param(0.0)
    with pytest.raises(DomainError):
        width_param_to_fwhm(-1.0)


def test_vectorized_and_helpers():
    lam = np.array([800.0, 830.0])
    assert wavelength_to_omega(lam).shape == (2,)
    assert ghz(10.0) == pytest.approx(0.01)
    assert omega_shift_to_nm(-1.0, 830.0) == pytest.approx(
        -bandwidth_thz_to_nm(1 / (2 * math.pi), 830.0))
    assert C_NM_PER_PS == 299792.458
