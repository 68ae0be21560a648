import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kickrotor.errors import InvalidParameterError, PulseTooLongError
from kickrotor.params import (CAESIUM, PhysicalConstants, RotorParams, kbar_from_period,
                              momentum_from_scaled, period_from_kbar, pulse_fraction,
                              scaled_momentum)


def test_recoil_frequency_band():
    f = CAESIUM.recoil_frequency / (2 * math.pi)
    assert 2.05e3 <= f <= 2.08e3
    assert CAESIUM.k_l == pytest.approx(2 * math.pi / 852e-9)
    assert CAESIUM.two_photon_recoil > 0


def test_constants_from_config():
    c = PhysicalConstants.from_config({"wavelength_nm": 780.0, "cs_mass_kg": 1.44e-25})
    assert c.wavelength == pytest.approx(780e-9)
    assert c.cs_mass == 1.44e-25
    with pytest.raises(InvalidParameterError):
        PhysicalConstants(wavelength=-1.0)


def test_kbar_from_period_examples():
    assert kbar_from_period(9.63e-6) == pytest.approx(1.0, abs=2e-3)
    assert period_from_kbar(3.0) == pytest.approx(28.9e-6, rel=2e-3)
    assert kbar_from_period(period_from_kbar(3.0)) == pytest.approx(3.0, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        kbar_from_period(0.0)


@given(st.floats(min_value=-8, max_value=0))
def test_period_round_trip(log_t):
    t = 10.0**log_t
    assert period_from_kbar(kbar_from_period(t)) == pytest.approx(t, rel=1e-12)


def test_pulse_fraction_examples():
    assert pulse_fraction(3.0, 480e-9) == pytest.approx(0.0166, abs=2e-4)
    assert pulse_fraction(0.0997, 480e-9) == pytest.approx(0.5, abs=2e-3)
    assert pulse_fraction(1.0, 0.0) == 0.0
    with pytest.raises(PulseTooLongError):
        pulse_fraction(0.04, 480e-9)


@given(st.floats(0.05, 10), st.floats(1.01, 3))
def test_pulse_fraction_decreasing(kbar, factor):
    assert pulse_fraction(kbar * factor, 480e-9) < pulse_fraction(kbar, 480e-9)


@given(st.floats(-50, 50), st.floats(0.01, 10), st.floats(0.1, 5))
def test_scaled_momentum_linear(p, kbar, c):
    assert scaled_momentum(c * p, kbar) == pytest.approx(c * scaled_momentum(p, kbar), abs=1e-9)
    assert scaled_momentum(p, c * kbar) == pytest.approx(c * scaled_momentum(p, kbar), abs=1e-9)
    assert momentum_from_scaled(scaled_momentum(p, kbar), kbar) == pytest.approx(p, abs=1e-12)


def test_scaled_momentum_examples():
    assert scaled_momentum(1.0, 2.0) == 2.0
    assert scaled_momentum(0.0, 0.7) == 0.0
    assert scaled_momentum(1.8, 0.5) == pytest.approx(0.9)


def test_rotor_params_derived():
    r = RotorParams(0.5, 7.0, 1.8, pulse_width=480e-9)
    assert r.kappa == pytest.approx(3.5)
    assert r.sigma_rho == pytest.approx(0.9)
    assert 0 < r.alpha <= 1
    with pytest.raises(InvalidParameterError):
        RotorParams(0.0, 7.0)
    with pytest.raises(InvalidParameterError):
        RotorParams(1.0, -1.0)
    with pytest.raises(PulseTooLongError):
        RotorParams(0.04, 7.0, pulse_width=480e-9).alpha
