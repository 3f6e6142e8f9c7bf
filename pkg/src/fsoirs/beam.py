"""Gaussian beam quantities and the incident field on the IRS plane."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import LinkGeometry

FREE_SPACE_IMPEDANCE = 377.0
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BeamParams:
    """Laser source: wavelength [m], waist radius [m], power [W], impedance [ohm]."""

    wavelength: float
    waist: float
    power: float = 1e-3
    impedance: float = FREE_SPACE_IMPEDANCE

    def __post_init__(self):
        for name in ("wavelength", "waist", "power", "impedance"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if self.waist < 10 * self.wavelength:
            raise DomainError(
                f"waist {self.waist} m is not much larger than the wavelength "
                f"{self.wavelength} m (need waist >= 10 wavelengths)"
            )

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def rayleigh_range(self) -> float:
        return math.pi * self.waist**2 / self.wavelength


def beamwidth(b: BeamParams, z):
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("beamwidth needs z >= 0")
    out = b.waist * np.sqrt(1.0 + (z / b.rayleigh_range) ** 2)
    return float(out) if out.ndim == 0 else out


def curvature_radius(b: BeamParams, z):
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("wavefront curvature radius diverges at z = 0")
    out = z * (1.0 + (b.rayleigh_range / z) ** 2)
    return float(out) if out.ndim == 0 else out


def far_field_beamwidth(b: BeamParams, z):
    return np.asarray(z) * b.wavelength / (math.pi * b.waist)


def wrap_phase(phase):
    """Reduce a phase to [-pi, pi)."""
    return np.mod(np.asarray(phase) + math.pi, TWO_PI) - math.pi


@dataclass(frozen=True)
class IncidentFieldSample:
    amplitude: np.ndarray | float
    phase: np.ndarray | float

    @property
    def complex(self):
        return self.amplitude * np.exp(1j * np.asarray(self.phase))


def incident_peak_amplitude(b: BeamParams, g: LinkGeometry) -> float:
    """Amplitude at the IRS centre, with the footprint stretch sin(theta_i) folded in."""
    w = beamwidth(b, g.d1)
    return math.sqrt(4.0 * b.impedance * b.power * g.sin_i / (math.pi * w * w))


def incident_field_on_irs(b: BeamParams, g: LinkGeometry, x_r, y_r) -> IncidentFieldSample:
    """Gaussian field of the Tx laser on the tilted IRS plane.

    Coordinates (x_r, y_r) are in the IRS plane with x_r pointing towards the
    Tx side.  |amplitude|^2 / (2 eta) integrated over the whole plane returns
    the laser power; the phase carries the on-axis path, the tilt term and the
    wavefront curvature.  The Gouy phase is constant across the IRS and omitted.
    """
    x_r = np.asarray(x_r, dtype=float)
    y_r = np.asarray(y_r, dtype=float)
    k = b.wavenumber
    w = beamwidth(b, g.d1)
    R = curvature_radius(b, g.d1)
    rho2 = (x_r * g.sin_i) ** 2 + y_r**2
    amp = incident_peak_amplitude(b, g) * np.exp(-rho2 / w**2)
    # k*d1 is ~4e9 rad; reduce it separately before adding the local terms
    phase = wrap_phase(-(k * g.d1) % TWO_PI + k * x_r * g.cos_i - k * rho2 / (2.0 * R))
    if amp.ndim == 0:
        return IncidentFieldSample(float(amp), float(phase))
    return IncidentFieldSample(amp, phase)
