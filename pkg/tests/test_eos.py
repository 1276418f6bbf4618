import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from leastaction import fixture as F
from leastaction.eos import (EosParams, State, action_density, energy_density, energy_density_with_kinetic,
                             energy_flux, pressure, pressure_derivative, pressure_potential, sound_speed)
from leastaction.errors import DomainError

E2 = EosParams(1.0, 2.0)
rhos = st.floats(0.1, 100.0)


def test_params_validated():
    with pytest.raises(DomainError):
        EosParams(0.0, 2.0)
    with pytest.raises(DomainError):
        EosParams(1.0, 1.0)
    with pytest.raises(DomainError):
        State(0.0)
    with pytest.raises(DomainError):
        State(-1.0, 0.0, 1.0)


def test_pressure_examples():
    assert pressure(E2, 1.0) == 1.0
    assert pressure(E2, 60.0) == 3600.0
    assert pressure(E2, 1e-12) < 1e-20
    with pytest.raises(DomainError):
        pressure(E2, 0.0)
    with pytest.raises(DomainError):
        pressure(E2, -2.0)


def test_pressure_potential_examples():
    assert pressure_potential(E2, 3.0) == 9.0
    assert pressure_potential(E2, 1.0) == 1.0
    eos = EosParams(1.0, 1.4)
    # oracle: P(rho) = rho * int_0^rho p(r)/r^2 dr
    val, _ = integrate.quad(lambda r: pressure(eos, r) / r**2, 0.0, 2.0, epsabs=1e-14, epsrel=1e-13)
    assert pressure_potential(eos, 2.0) == pytest.approx(2.0 * val, rel=1e-10)
    assert pressure_potential(eos, 2.0) == pytest.approx(1.4 * 2**1.4 / 0.4 / 1.4, rel=1e-14)
    with pytest.raises(DomainError):
        pressure_potential(E2, 0.0)


def test_sound_speed_examples():
    assert sound_speed(E2, 2.0) == 2.0
    assert isinstance(sound_speed(E2, 2.0), float)
    for rho in (1.0, 60.0):
        h = 1e-6 * rho
        fd = (pressure(E2, rho + h) - pressure(E2, rho - h)) / (2 * h)
        assert sound_speed(E2, rho) == pytest.approx(math.sqrt(fd), rel=1e-8)
    assert sound_speed(E2, 60.0) == pytest.approx(math.sqrt(120.0), rel=1e-15)


def test_action_density_examples():
    assert action_density(E2, State(3.0)) == -9.0
    assert action_density(E2, State(60.0, 0.0, F.V2)) == pytest.approx(61029 / 2, rel=1e-12)
    assert action_density(E2, State(1.0)) == -1.0


def test_energy_examples():
    assert energy_density(E2, State(1.0)) == 1.0
    assert energy_density_with_kinetic(E2, 3.0, F.C1) == pytest.approx(1.5 * F.C1 + 9, rel=1e-15)
    assert energy_density_with_kinetic(E2, 2.0, 0.0) == 4.0
    with pytest.raises(DomainError):
        energy_density_with_kinetic(E2, 2.0, -1e-3)


def test_vectorized_inputs():
    r = np.array([1.0, 2.0, 4.0])
    np.testing.assert_allclose(pressure(E2, r), r**2)
    np.testing.assert_allclose(sound_speed(E2, r), np.sqrt(2 * r))
    with pytest.raises(DomainError):
        pressure(E2, np.array([1.0, 0.0]))


@given(rho=rhos, gamma=st.floats(1.05, 3.0), K=st.floats(0.2, 5.0))
def test_euler_relation(rho, gamma, K):
    eos = EosParams(K, gamma)
    h = 1e-6 * rho
    dP = (pressure_potential(eos, rho + h) - pressure_potential(eos, rho - h)) / (2 * h)
    assert rho * dP - pressure_potential(eos, rho) == pytest.approx(pressure(eos, rho), rel=1e-6)


@given(rho=rhos, gamma=st.floats(1.05, 3.0))
def test_sound_speed_is_fd_derivative(rho, gamma):
    eos = EosParams(1.0, gamma)
    h = 1e-6 * rho
    fd = (pressure(eos, rho + h) - pressure(eos, rho - h)) / (2 * h)
    assert sound_speed(eos, rho) ** 2 == pytest.approx(fd, rel=1e-6)
    assert pressure_derivative(eos, rho) == pytest.approx(fd, rel=1e-6)


@given(rho=rhos)
def test_quadratic_law_identity(rho):
    assert pressure_potential(E2, rho) == pressure(E2, rho) == rho * rho


@given(rho=rhos, u=st.floats(-50, 50), v=st.floats(-50, 50))
def test_energy_minus_action(rho, u, v):
    s = State(rho, u, v)
    diff = energy_density(E2, s) - action_density(E2, s)
    assert diff == pytest.approx(2 * pressure_potential(E2, rho), rel=1e-12, abs=1e-12)


def test_energy_flux():
    s = State(2.0, 1.0, 3.0)
    assert energy_flux(E2, s) == pytest.approx((energy_density(E2, s) + 4.0) * 3.0)
