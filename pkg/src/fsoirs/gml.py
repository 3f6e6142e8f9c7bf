"""Closed-form geometric loss (GML) for relay hops and the three IRS power-scaling regimes."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy.special import erf, sici

from .beam import BeamParams, beamwidth, curvature_radius
from .errors import DomainError, ValidityWarning
from .geometry import PHI_INCIDENT, PHI_REFLECTED, LinkGeometry

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)

# "much smaller" / "much larger" thresholds used for validity warnings
SMALL_RATIO = 0.2
LARGE_RATIO = 10.0


@dataclass(frozen=True)
class IrsSpec:
    """Rectangular IRS with a linear phase profile k (phi_x x + phi_y y + phi_0)."""

    L_x: float
    L_y: float
    phi_x: float = 0.0
    phi_y: float = 0.0
    phi_0: float = 0.0

    def __post_init__(self):
        if not (self.L_x > 0 and self.L_y > 0):
            raise DomainError(f"IRS lengths must be positive, got {self.L_x} x {self.L_y}")

    @classmethod
    def steering(cls, L_x: float, L_y: float, g: LinkGeometry) -> "IrsSpec":
        """IRS whose phase gradients redirect the Tx beam towards the Rx."""
        cos_i, cos_r = g.cos_i, g.cos_r
        return cls(
            L_x=L_x,
            L_y=L_y,
            phi_x=cos_i * math.cos(PHI_INCIDENT) + cos_r * math.cos(PHI_REFLECTED),
            phi_y=cos_i * math.sin(PHI_INCIDENT) + cos_r * math.sin(PHI_REFLECTED),
            phi_0=g.d1 + g.d2,
        )

    @classmethod
    def square(cls, L: float, g: LinkGeometry) -> "IrsSpec":
        return cls.steering(L, L, g)

    @property
    def area(self) -> float:
        return self.L_x * self.L_y

    def check_electrical_size(self, wavelength: float) -> None:
        if min(self.L_x, self.L_y) < 100 * wavelength:
            raise DomainError(
                "IRS lengths must be at least 100 wavelengths to be treated as a continuous surface"
            )


@dataclass(frozen=True)
class LensSpec:
    radius: float
    responsivity: float = 1.0

    def __post_init__(self):
        if not (self.radius > 0 and self.responsivity > 0):
            raise DomainError("lens radius and responsivity must be positive")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


class Regime(enum.Enum):
    QUADRATIC = "quadratic"
    LINEAR = "linear"
    SATURATED = "saturated"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    S1: float
    S2: Optional[float]
    S3: Optional[float]
    gml: float
    three_branch: bool


def _warn(msg: str) -> None:
    warnings.warn(msg, ValidityWarning, stacklevel=3)


def relay_hop_gml(a: float, b: BeamParams, d: float) -> float:
    """Fraction of a Gaussian beam captured by a lens of radius a at distance d."""
    if not d > 0:
        raise DomainError(f"hop distance must be positive, got {d}")
    return float(erf(SQRT_HALF_PI * a / beamwidth(b, d)) ** 2)


def gml_linear(irs: IrsSpec, b: BeamParams, g: LinkGeometry) -> float:
    """Normalised power of the Gaussian beam intercepted by the IRS (erf product)."""
    w = beamwidth(b, g.d1)
    s = math.sqrt(0.5)
    return float(erf(s * irs.L_x * g.sin_i / w) * erf(s * irs.L_y / w))


def _si_bracket(u: float) -> float:
    # u Si(u) + cos(u) - 1, with its Taylor form where the direct sum cancels
    if u < 1e-3:
        return 0.5 * u * u - u**4 / 72.0
    return u * sici(u)[0] + math.cos(u) - 1.0


def gml_quadratic_exact(irs: IrsSpec, lens: LensSpec, b: BeamParams, g: LinkGeometry) -> float:
    """Small-IRS GML with the sinc-shaped received field integrated over the lens."""
    w = beamwidth(b, g.d1)
    if irs.L_x * g.sin_i / w > SMALL_RATIO or irs.L_y / w > SMALL_RATIO:
        _warn("IRS is not small compared with the incident beam footprint")
    k = b.wavenumber
    a, d2, sin_r = lens.radius, g.d2, abs(g.sin_r)
    side = a * math.sqrt(math.pi)
    c1 = k * sin_r * irs.L_x / (2.0 * d2)
    c2 = k * irs.L_y / (2.0 * d2)
    C1 = 16.0 * d2**2 * gml_linear(irs, b, g) / (
        math.pi**3 * a**2 * k**2 * irs.L_x * irs.L_y * sin_r
    )
    return C1 * _si_bracket(c1 * side) * _si_bracket(c2 * side)


def gml_quadratic_asymptotic(irs: IrsSpec, lens: LensSpec, b: BeamParams, g: LinkGeometry) -> float:
    """Quadratic-regime GML, proportional to the squared IRS area."""
    if g.d1 < LARGE_RATIO * b.rayleigh_range:
        _warn("Tx-to-IRS distance is not far beyond the Rayleigh range")
    lam = b.wavelength
    g_ls = b.waist**2 / (2.0 * g.d1**2)
    g_pd = lens.radius**2 / (4.0 * g.d2**2)
    return (
        16.0 * math.pi**2 * irs.area**2 * abs(g.sin_r) * abs(g.sin_i) / lam**4 * g_ls * g_pd
    )


def gml_linear_asymptotic(irs: IrsSpec, b: BeamParams, g: LinkGeometry) -> float:
    """Linear-regime GML, proportional to the IRS area."""
    w = beamwidth(b, g.d1)
    if irs.L_x / w > SMALL_RATIO or irs.L_y / w > SMALL_RATIO:
        _warn("IRS is not small compared with the incident beamwidth")
    g_ls = b.waist**2 / (2.0 * g.d1**2)
    return 4.0 * math.pi * irs.area * abs(g.sin_i) / b.wavelength**2 * g_ls


def equivalent_beamwidths(b: BeamParams, g: LinkGeometry) -> tuple[float, float]:
    """Widths (x, y) of the beam reflected by an unbounded IRS, seen at the lens."""
    w = beamwidth(b, g.d1)
    lam1 = 2.0 * g.d2 / (b.wavenumber * w * w)
    lam2 = g.d2 / curvature_radius(b, g.d1)
    si, sr = abs(g.sin_i), abs(g.sin_r)
    r = si**2 / sr**2
    w_x = w * sr / si * math.hypot(lam1 * r, lam2 * r + 1.0)
    w_y = w * math.hypot(lam1, lam2 + 1.0)
    return w_x, w_y


def gml_saturated(lens: LensSpec, b: BeamParams, g: LinkGeometry) -> float:
    """Large-IRS GML, limited by the lens and independent of the IRS size."""
    w_x, w_y = equivalent_beamwidths(b, g)
    a = lens.radius
    return float(erf(SQRT_HALF_PI * a / w_x) * erf(SQRT_HALF_PI * a / w_y))


def boundary_sizes(lens: LensSpec, b: BeamParams, g: LinkGeometry, g3: Optional[float] = None):
    """IRS areas where the quadratic, linear and saturated GML curves intersect.

    Returns (S1, S2, S3, three_branch).  S1 is where the quadratic and linear
    curves meet, S2 the linear/saturated crossing and S3 the quadratic/saturated
    crossing.  The linear regime exists only when S1 <= S2.
    """
    if g3 is None:
        g3 = gml_saturated(lens, b, g)
    lam, a, wo = b.wavelength, lens.radius, b.waist
    si, sr = abs(g.sin_i), abs(g.sin_r)
    s1 = lam**2 * g.d2**2 / (math.pi * a**2 * sr)
    s2 = g3 * lam**2 * g.d1**2 / (2.0 * math.pi * si * wo**2)
    s3 = math.sqrt(g3) * lam**2 * g.d1 * g.d2 / (
        math.sqrt(2.0) * math.pi * wo * a * math.sqrt(si * sr)
    )
    three_branch = g3 >= 2.0 * g.d2**2 * wo**2 * si / (g.d1**2 * a**2 * sr)
    return s1, s2, s3, three_branch


def regime_report(irs: IrsSpec, lens: LensSpec, b: BeamParams, g: LinkGeometry) -> RegimeReport:
    """Active power-scaling regime, its boundary sizes and the piecewise GML."""
    g3 = gml_saturated(lens, b, g)
    s1, s2, s3, three = boundary_sizes(lens, b, g, g3)
    area = irs.area
    with warnings.catch_warnings():
        # the piecewise map deliberately stitches approximations across their edges
        warnings.simplefilter("ignore", ValidityWarning)
        if three:
            if area < s1:
                regime, value = Regime.QUADRATIC, gml_quadratic_asymptotic(irs, lens, b, g)
            elif area <= s2:
                regime, value = Regime.LINEAR, gml_linear_asymptotic(irs, b, g)
            else:
                regime, value = Regime.SATURATED, g3
        elif area <= s3:
            regime, value = Regime.QUADRATIC, gml_quadratic_asymptotic(irs, lens, b, g)
        else:
            regime, value = Regime.SATURATED, g3
    return RegimeReport(
        regime=regime,
        S1=s1,
        S2=s2 if three else None,
        S3=None if three else s3,
        gml=value,
        three_branch=three,
    )


def regime_closed_form(irs: IrsSpec, lens: LensSpec, b: BeamParams, g: LinkGeometry) -> float:
    """Unapproximated closed form of the active regime.

    Quadratic regime: sinc-squared lens integral. Linear regime: intercepted
    beam power. Saturated regime: lens-limited value.
    """
    rep = regime_report(irs, lens, b, g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        if rep.regime is Regime.QUADRATIC:
            return gml_quadratic_exact(irs, lens, b, g)
        if rep.regime is Regime.LINEAR:
            return gml_linear(irs, b, g)
    return rep.gml
