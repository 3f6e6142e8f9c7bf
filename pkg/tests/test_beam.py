import math

import numpy as np
import pytest
from scipy import integrate

from fsoirs.beam import BeamParams, beamwidth, curvature_radius, incident_field_on_irs
from fsoirs.errors import DomainError


def test_beamwidth_limits(beam25):
    zr = beam25.rayleigh_range
    assert zr == pytest.approx(12.67, abs=0.01)
    assert beamwidth(beam25, 0.0) == beam25.waist
    assert beamwidth(beam25, zr) == pytest.approx(beam25.waist * math.sqrt(2))


def test_beamwidth_far_field(beam25):
    w = beamwidth(beam25, 1000.0)
    assert w == pytest.approx(0.19737, rel=1e-4)
    assert w == pytest.approx(1000.0 * 1550e-9 / (math.pi * 2.5e-3), rel=1e-4)


def test_beamwidth_increasing_and_convex(beam25):
    z = np.linspace(0, 200, 2001)
    w = beamwidth(beam25, z)
    assert np.all(np.diff(w) > 0)
    assert np.all(np.diff(w, 2) > -1e-15)


def test_curvature_radius(beam25):
    zr = beam25.rayleigh_range
    assert curvature_radius(beam25, zr) == pytest.approx(2 * zr)
    assert curvature_radius(beam25, 1000.0) == pytest.approx(1000.16, abs=0.01)
    # 1/(z/zR)^2 < 1e-3 needs z > 31.6 zR
    z = zr * np.array([32.0, 100.0, 300.0])
    assert np.all(np.abs(curvature_radius(beam25, z) / z - 1) < 1e-3)
    with pytest.raises(DomainError):
        curvature_radius(beam25, 0.0)


@pytest.mark.parametrize("kwargs", [
    dict(wavelength=-1550e-9, waist=2.5e-3),
    dict(wavelength=1550e-9, waist=1e-5),
    dict(wavelength=1550e-9, waist=2.5e-3, power=0.0),
])
def test_invalid_beam(kwargs):
    with pytest.raises(DomainError):
        BeamParams(**kwargs)


def test_on_axis_sample(beam25, apex):
    s = incident_field_on_irs(beam25, apex, 0.0, 0.0)
    w = beamwidth(beam25, apex.d1)
    assert s.amplitude**2 == pytest.approx(4 * 377 * 1e-3 * 0.6 / (math.pi * w * w))
    expected = math.remainder(-beam25.wavenumber * apex.d1, 2 * math.pi)
    assert math.remainder(s.phase - expected, 2 * math.pi) == pytest.approx(0.0, abs=1e-6)


def test_power_on_irs_plane(beam25, apex):
    # |E|^2 / (2 eta) over the tilted plane returns the laser power
    w = beamwidth(beam25, apex.d1)
    f = lambda y, x: incident_field_on_irs(beam25, apex, x, y).amplitude ** 2 / (2 * 377)
    hx, hy = 6 * w / apex.sin_i, 6 * w
    p, _ = integrate.dblquad(f, -hx, hx, -hy, hy, epsrel=1e-10)
    assert p == pytest.approx(beam25.power, rel=1e-6)


def test_parity(beam25, apex):
    x = np.array([0.03, 0.1])
    y = np.array([0.02, 0.05])
    a = incident_field_on_irs(beam25, apex, x, y).amplitude
    assert np.allclose(a, incident_field_on_irs(beam25, apex, -x, -y).amplitude, rtol=1e-14)


def test_plane_wave_slope(beam25, apex):
    # over a small patch the phase is linear with slope k cos(theta_i)
    x = np.linspace(-5e-4, 5e-4, 4001)
    ph = np.unwrap(incident_field_on_irs(beam25, apex, x, 0 * x).phase)
    slope = np.polyfit(x, ph, 1)[0]
    assert slope == pytest.approx(beam25.wavenumber * apex.cos_i, rel=0.01)
