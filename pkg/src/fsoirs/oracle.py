"""Brute-force Huygens-Fresnel evaluation of the field reflected by the IRS.

The reflected field at a lens point is the surface integral of the incident
Gaussian field, the IRS phase profile and the exact spherical propagation
phase exp(-j k D) with D the true 3-D distance from the IRS point to the lens
point.  Nothing in this module relies on the closed forms in :mod:`fsoirs.gml`.

Two evaluation routes are provided:

* :func:`reflected_field` sums the exact kernel on the full 2-D IRS grid.
* :func:`gml_numeric` splits the propagation phase into a separable Fresnel
  part plus a smooth, non-separable remainder that is represented by a
  Chebyshev tensor interpolant.  The kernel is still the exact square root;
  only the bookkeeping changes, which brings the cost per lens point from
  O(Nx*Ny) down to O(Nx + Ny).

Frames: the IRS frame has x_r pointing horizontally towards the Tx, y_r
normal to the plane of incidence.  The lens frame has y_p parallel to y_r and
x_p in the plane of incidence, perpendicular to the reflected beam axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import chebyshev, legendre

from .beam import BeamParams, beamwidth, curvature_radius, incident_peak_amplitude
from .errors import DomainError, ResolutionError
from .geometry import LinkGeometry
from .gml import IrsSpec, LensSpec, gml_linear

TWO_PI = 2.0 * math.pi
PANEL_ORDER = 16
# Gaussian amplitude beyond TRUNCATION beamwidths is below exp(-64)
TRUNCATION = 8.0
LENS_CHUNK = 128


@dataclass(frozen=True)
class QuadratureSpec:
    irs_samples_per_axis: int = 32
    lens_samples_per_axis: int = 16
    oversampling_factor: float = 4.0
    refinement_tolerance: float = 0.01
    chebyshev_nodes: int = 12

    def __post_init__(self):
        if self.irs_samples_per_axis < 8 or self.lens_samples_per_axis < 8:
            raise DomainError("sample counts per axis must be at least 8")
        if self.oversampling_factor < 4:
            raise DomainError("oversampling factor must be at least 4 samples per 2*pi")
        if not 0 < self.refinement_tolerance < 0.1:
            raise DomainError("refinement tolerance must lie in (0, 0.1)")
        if self.chebyshev_nodes < 4:
            raise DomainError("need at least 4 Chebyshev nodes per axis")

    def refined(self) -> "QuadratureSpec":
        """Every step halved: twice the samples per axis and per 2*pi of phase."""
        return replace(
            self,
            irs_samples_per_axis=2 * self.irs_samples_per_axis,
            lens_samples_per_axis=2 * self.lens_samples_per_axis,
            oversampling_factor=2 * self.oversampling_factor,
            chebyshev_nodes=self.chebyshev_nodes + 6,
        )


def _gauss_panels(lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    panels = max(1, math.ceil(n / PANEL_ORDER))
    t, w = legendre.leggauss(PANEL_ORDER)
    edges = np.linspace(lo, hi, panels + 1)
    h = np.diff(edges)[:, None]
    nodes = edges[:-1, None] + 0.5 * h * (t[None, :] + 1.0)
    return nodes.ravel(), (0.5 * h * w[None, :]).ravel()


@dataclass
class _Aperture:
    """IRS quadrature grid with the separable parts of the integrand folded in."""

    x: np.ndarray
    y: np.ndarray
    fx: np.ndarray
    gy: np.ndarray
    half_x: float
    half_y: float
    k: float
    d2: float
    sin_r: float
    cos_r: float
    prefactor: complex


def _aperture(irs: IrsSpec, b: BeamParams, g: LinkGeometry, reach_x: float, reach_y: float,
              q: QuadratureSpec) -> _Aperture:
    irs.check_electrical_size(b.wavelength)
    k = b.wavenumber
    w = beamwidth(b, g.d1)
    R = curvature_radius(b, g.d1)
    si, sr, ci, cr = g.sin_i, g.sin_r, g.cos_i, g.cos_r
    d2 = g.d2
    # residual tilt left after the phase profile (zero for a steering IRS)
    tilt_x = irs.phi_x - ci + cr
    tilt_y = irs.phi_y
    half_x = min(0.5 * irs.L_x, TRUNCATION * w / si)
    half_y = min(0.5 * irs.L_y, TRUNCATION * w)
    # largest local phase frequency over the aperture [rad/m]
    freq_x = k * (abs(tilt_x) + half_x * (si * si / R + sr * sr / d2) + reach_x * sr / d2)
    freq_y = k * (abs(tilt_y) + half_y * (1.0 / R + 1.0 / d2) + reach_y / d2)
    ovs = q.oversampling_factor
    nx = max(q.irs_samples_per_axis, math.ceil(ovs * 2 * half_x * freq_x / TWO_PI))
    ny = max(q.irs_samples_per_axis, math.ceil(ovs * 2 * half_y * freq_y / TWO_PI))
    x, wx = _gauss_panels(-half_x, half_x, nx)
    y, wy = _gauss_panels(-half_y, half_y, ny)
    fx = wx * np.exp(-((x * si / w) ** 2) - 1j * k * (x * x * si * si / (2 * R) + tilt_x * x))
    gy = wy * np.exp(-((y / w) ** 2) - 1j * k * (y * y / (2 * R) + tilt_y * y))
    const_phase = -math.fmod(k * (g.d1 + g.d2 + irs.phi_0), TWO_PI)
    c_r = math.sqrt(sr) / (1j * b.wavelength * d2)
    prefactor = c_r * incident_peak_amplitude(b, g) * complex(math.cos(const_phase), math.sin(const_phase))
    return _Aperture(x, y, fx, gy, half_x, half_y, k, d2, sr, cr, prefactor)


def _excess_path(ap: _Aperture, x, y, xp, yp):
    """D - d2 - cos(theta_r) x for IRS point (x, y) and lens point (xp, yp).

    Evaluated without forming d2^2 + ... - d2^2 so that the ~1e3 m distance does
    not swamp the sub-micron path differences.
    """
    d2 = ap.d2
    q = x * x + xp * xp - 2.0 * xp * ap.sin_r * x + (yp - y) ** 2
    p = q + 2.0 * d2 * ap.cos_r * x
    delta = p / (np.sqrt(d2 * d2 + p) + d2)
    return (q - delta * delta) / (2.0 * d2)


def _field_direct(ap: _Aperture, xp: float, yp: float) -> complex:
    total = 0.0 + 0.0j
    step = max(1, 2_000_000 // max(1, ap.y.size))
    for start in range(0, ap.x.size, step):
        xs = ap.x[start:start + step, None]
        eps = _excess_path(ap, xs, ap.y[None, :], xp, yp)
        inner = np.exp(-1j * ap.k * eps) @ ap.gy
        total += ap.fx[start:start + step] @ inner
    return ap.prefactor * total


def reflected_field(irs: IrsSpec, b: BeamParams, g: LinkGeometry, lens_point,
                    q: QuadratureSpec = QuadratureSpec(), check: bool = True) -> complex:
    """Reflected field at one lens point by direct summation of the exact kernel.

    With ``check`` the sum is repeated on a grid with halved steps and a
    :class:`ResolutionError` is raised if |E|^2 moves by more than the
    refinement tolerance.
    """
    xp, yp = (float(v) for v in lens_point)
    reach_x, reach_y = abs(xp), abs(yp)
    value = _field_direct(_aperture(irs, b, g, reach_x, reach_y, q), xp, yp)
    if check:
        fine = _field_direct(_aperture(irs, b, g, reach_x, reach_y, q.refined()), xp, yp)
        coarse_i, fine_i = abs(value) ** 2, abs(fine) ** 2
        if abs(fine_i - coarse_i) > q.refinement_tolerance * max(fine_i, 1e-300):
            raise ResolutionError(
                f"|E_r|^2 changed by {abs(fine_i - coarse_i) / fine_i:.3g} under refinement"
            )
        value = fine
    return value


def _cheb_nodes(n: int, half: float) -> np.ndarray:
    return half * np.cos(math.pi * (np.arange(n) + 0.5) / n)


def _lagrange_matrix(x: np.ndarray, nodes: np.ndarray, half: float) -> np.ndarray:
    n = nodes.size
    vx = chebyshev.chebvander(x / half, n - 1)
    vn = chebyshev.chebvander(nodes / half, n - 1)
    return np.linalg.solve(vn.T, vx.T).T


def _remainder_phase_bound(ap: _Aperture, reach: float) -> float:
    """Rough bound on k*|non-separable remainder| over the aperture."""
    worst = 0.0
    for sx in (-1.0, 1.0):
        for sy in (-1.0, 1.0):
            for px in (-reach, reach):
                eps = float(_excess_path(ap, sx * ap.half_x, sy * ap.half_y, px, reach))
                rem = -eps * (2.0 * ap.cos_r * sx * ap.half_x + eps) / (2.0 * ap.d2)
                worst = max(worst, abs(ap.k * rem))
    return worst


def _fields_factored(ap: _Aperture, xp: np.ndarray, yp: np.ndarray, n_cheb: int) -> np.ndarray:
    k, d2, sr, cr = ap.k, ap.d2, ap.sin_r, ap.cos_r
    xi = _cheb_nodes(n_cheb, ap.half_x)
    eta = _cheb_nodes(n_cheb, ap.half_y)
    lx = _lagrange_matrix(ap.x, xi, ap.half_x)
    ly = _lagrange_matrix(ap.y, eta, ap.half_y)
    out = np.empty(xp.size, dtype=complex)
    for start in range(0, xp.size, LENS_CHUNK):
        px = xp[start:start + LENS_CHUNK, None]
        py = yp[start:start + LENS_CHUNK, None]
        chirp_x = np.exp(-1j * k * (sr * ap.x[None, :] - px) ** 2 / (2.0 * d2))
        chirp_y = np.exp(-1j * k * (ap.y[None, :] - py) ** 2 / (2.0 * d2))
        X = (chirp_x * ap.fx[None, :]) @ lx
        Y = (chirp_y * ap.gy[None, :]) @ ly
        # exact excess path minus its separable Fresnel part, at the Chebyshev nodes
        gx = xi[None, :, None]
        gyy = eta[None, None, :]
        eps = _excess_path(ap, gx, gyy, px[:, :, None], py[:, :, None])
        remainder = -eps * (2.0 * cr * gx + eps) / (2.0 * d2)
        out[start:start + LENS_CHUNK] = np.einsum(
            "ma,mab,mb->m", X, np.exp(-1j * k * remainder), Y
        )
    return ap.prefactor * out


def reflected_field_map(irs: IrsSpec, b: BeamParams, g: LinkGeometry, xp, yp,
                        q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Reflected field at many lens points (factorised exact kernel, no refinement check)."""
    xp = np.asarray(xp, dtype=float)
    yp = np.asarray(yp, dtype=float)
    shape = np.broadcast(xp, yp).shape
    xp, yp = (np.broadcast_to(v, shape).ravel() for v in (xp, yp))
    reach = float(max(np.max(np.abs(xp)), np.max(np.abs(yp)), 0.0))
    ap = _aperture(irs, b, g, reach, reach, q)
    n_cheb = q.chebyshev_nodes + math.ceil(4.0 * _remainder_phase_bound(ap, reach))
    return _fields_factored(ap, xp, yp, n_cheb).reshape(shape)


def _lens_rule(radius: float, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Polar product rule on the disc: Gauss-Legendre in r, trapezoid in angle."""
    t, w = legendre.leggauss(n)
    r = 0.5 * radius * (t + 1.0)
    wr = 0.5 * radius * w * r
    n_theta = 2 * n
    theta = TWO_PI * (np.arange(n_theta) + 0.5) / n_theta
    xp = (r[:, None] * np.cos(theta)[None, :]).ravel()
    yp = (r[:, None] * np.sin(theta)[None, :]).ravel()
    weights = (wr[:, None] * np.full(n_theta, TWO_PI / n_theta)[None, :]).ravel()
    return xp, yp, weights


def _gml_once(irs, lens, b, g, q) -> float:
    xp, yp, wt = _lens_rule(lens.radius, q.lens_samples_per_axis)
    fields = reflected_field_map(irs, b, g, xp, yp, q)
    return float(np.sum(wt * np.abs(fields) ** 2) / (2.0 * b.impedance * b.power))


@dataclass(frozen=True)
class OracleResult:
    value: float
    coarse: float
    relative_change: float


def gml_numeric_report(irs: IrsSpec, lens: LensSpec, b: BeamParams, g: LinkGeometry,
                       q: QuadratureSpec = QuadratureSpec()) -> OracleResult:
    coarse = _gml_once(irs, lens, b, g, q)
    fine = _gml_once(irs, lens, b, g, q.refined())
    change = abs(fine - coarse) / max(abs(fine), 1e-300)
    return OracleResult(value=fine, coarse=coarse, relative_change=change)


def gml_numeric(irs: IrsSpec, lens: LensSpec, b: BeamParams, g: LinkGeometry,
                q: QuadratureSpec = QuadratureSpec()) -> float:
    """GML as the lens-integrated reflected intensity over 2*eta*P_tot.

    Raises :class:`ResolutionError` when halving every quadrature step moves the
    result by more than ``q.refinement_tolerance``.
    """
    res = gml_numeric_report(irs, lens, b, g, q)
    if res.relative_change > q.refinement_tolerance:
        raise ResolutionError(
            f"GML changed by {res.relative_change:.3g} under refinement "
            f"({res.coarse:.6g} -> {res.value:.6g})"
        )
    return res.value


def sinc_field(irs: IrsSpec, b: BeamParams, g: LinkGeometry, lens_point) -> complex:
    """Small-IRS far-field model: the plane-wave illuminated aperture gives a 2-D sinc."""
    xp, yp = lens_point
    k, d2, sr = b.wavenumber, g.d2, g.sin_r
    # plane-wave amplitude carrying the same power as the intercepted Gaussian beam
    e_o = math.sqrt(2.0 * b.impedance * b.power * gml_linear(irs, b, g) / irs.area)
    phase = -math.fmod(k * (irs.phi_0 + g.d1 + g.d2), TWO_PI)
    c = irs.area * e_o * math.sqrt(sr) / (1j * b.wavelength * d2) * complex(math.cos(phase), math.sin(phase))
    ux = k * irs.L_x * sr * np.asarray(xp) / (2.0 * d2)
    uy = k * irs.L_y * np.asarray(yp) / (2.0 * d2)
    return c * np.sinc(ux / math.pi) * np.sinc(uy / math.pi)


@dataclass
class FieldMap:
    """Reflected field sampled on a square grid covering the lens disc."""

    x: np.ndarray
    y: np.ndarray
    field: np.ndarray
    spacing: float = field(init=False)

    def __post_init__(self):
        self.spacing = float(self.x[1] - self.x[0])

    def dump(self, path) -> None:
        """Write |E|^2 row-major (rows follow y) as tab-separated text."""
        intensity = np.abs(self.field) ** 2
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# quantity=|E_r|^2 [V^2/m^2] rows={self.y.size} cols={self.x.size}\n")
            fh.write(f"# x0={self.x[0]!r} y0={self.y[0]!r} spacing={self.spacing!r}\n")
            for row in intensity:
                fh.write("\t".join(f"{v:.10e}" for v in row) + "\n")


def field_map(irs: IrsSpec, lens: LensSpec, b: BeamParams, g: LinkGeometry, n: int = 65,
              q: QuadratureSpec = QuadratureSpec()) -> FieldMap:
    x = np.linspace(-lens.radius, lens.radius, n)
    X, Y = np.meshgrid(x, x)
    return FieldMap(x=x, y=x.copy(), field=reflected_field_map(irs, b, g, X, Y, q))
