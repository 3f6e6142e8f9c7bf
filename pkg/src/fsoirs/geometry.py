"""Tx / node / Rx geometry on the constant-path-length ellipse.

Tx sits at (-L_tr/2, 0) and Rx at (+L_tr/2, 0).  The intermediate node (IRS or
relay) is centred at (x_o, z_o) with z_o > 0, so every node with the same
end-to-end distance d3 = d1 + d2 lies on an ellipse with foci at Tx and Rx.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Azimuths of the in-plane configuration: the incident beam arrives along +x_r
# (towards Tx) and the reflected beam leaves towards -x_r.
PHI_INCIDENT = 0.0
PHI_REFLECTED = math.pi


@dataclass(frozen=True)
class LinkGeometry:
    d1: float
    d2: float
    L_tr: float
    x_o: float
    z_o: float

    @property
    def d3(self) -> float:
        return self.d1 + self.d2

    @property
    def sin_i(self) -> float:
        return self.z_o / self.d1

    @property
    def sin_r(self) -> float:
        return self.z_o / self.d2

    @property
    def cos_i(self) -> float:
        return (self.x_o + 0.5 * self.L_tr) / self.d1

    @property
    def cos_r(self) -> float:
        return (0.5 * self.L_tr - self.x_o) / self.d2

    @property
    def theta_i(self) -> float:
        return math.atan2(self.z_o, self.x_o + 0.5 * self.L_tr)

    @property
    def theta_r(self) -> float:
        return math.atan2(self.z_o, 0.5 * self.L_tr - self.x_o)

    @property
    def semi_minor(self) -> float:
        """H_e, the height of the ellipse above the baseline."""
        return ellipse_height(self.d3, self.L_tr)

    def mirrored(self) -> "LinkGeometry":
        return geometry_from_position(-self.x_o, self.z_o, self.L_tr)


def ellipse_height(d3: float, L_tr: float) -> float:
    if not d3 > L_tr > 0:
        raise DomainError(f"need d3 > L_tr > 0, got d3={d3}, L_tr={L_tr}")
    return 0.5 * math.sqrt(d3 * d3 - L_tr * L_tr)


def ellipse_residual(x_o: float, z_o: float, d3: float, L_tr: float) -> float:
    """Relative violation of x^2/d3^2 + z^2/(d3^2 - L_tr^2) = 1/4."""
    lhs = x_o**2 / d3**2 + z_o**2 / (d3**2 - L_tr**2)
    return abs(lhs - 0.25) / 0.25


def position_from_hop_split(d1: float, d3: float, L_tr: float) -> tuple[float, float]:
    """Node centre (x_o, z_o) for a Tx-to-node distance d1 on the ellipse."""
    if not 0 < d1 < d3:
        raise DomainError(f"need 0 < d1 < d3, got d1={d1}, d3={d3}")
    h_e = ellipse_height(d3, L_tr)
    d2 = d3 - d1
    # d1^2 - d2^2 = d3 (d1 - d2) avoids cancellation near the midpoint
    diff = d3 * (d1 - d2)
    if abs(diff) > d3 * L_tr * (1 + 1e-12):
        raise DomainError(
            f"d1={d1} is off the ellipse: |d1^2 - d2^2| exceeds d3*L_tr"
        )
    ratio = min(1.0, (diff / (d3 * L_tr)) ** 2)
    return diff / (2.0 * L_tr), h_e * math.sqrt(1.0 - ratio)


def geometry_from_position(x_o: float, z_o: float, L_tr: float) -> LinkGeometry:
    if not z_o > 0:
        raise DomainError(f"node must lie above the baseline, got z_o={z_o}")
    if not L_tr > 0:
        raise DomainError(f"need L_tr > 0, got {L_tr}")
    d1 = math.hypot(x_o + 0.5 * L_tr, z_o)
    d2 = math.hypot(0.5 * L_tr - x_o, z_o)
    return LinkGeometry(d1=d1, d2=d2, L_tr=L_tr, x_o=x_o, z_o=z_o)


def geometry_from_hop_split(d1: float, d3: float, L_tr: float) -> LinkGeometry:
    x_o, z_o = position_from_hop_split(d1, d3, L_tr)
    # keep d1 + d2 = d3 exactly instead of re-deriving distances from (x_o, z_o)
    return LinkGeometry(d1=d1, d2=d3 - d1, L_tr=L_tr, x_o=x_o, z_o=z_o)


def point_on_ellipse(x_o: float, d3: float, L_tr: float) -> LinkGeometry:
    """Geometry of the node at abscissa x_o on the upper half-ellipse."""
    h_e = ellipse_height(d3, L_tr)
    u = 2.0 * x_o / d3
    if not abs(u) < 1:
        raise DomainError(f"|x_o| must be below d3/2 = {d3 / 2}, got {x_o}")
    z_o = h_e * math.sqrt((1.0 - u) * (1.0 + u))
    return geometry_from_position(x_o, z_o, L_tr)


def ellipse_sweep(d3: float, L_tr: float, n: int) -> list[LinkGeometry]:
    """n nodes with x_o uniformly spaced over the open interval (-d3/2, d3/2)."""
    if n < 2:
        raise DomainError(f"need n >= 2 samples, got {n}")
    xs = np.linspace(-0.5 * d3, 0.5 * d3, n + 2)[1:-1]
    # exact symmetry of the grid about x = 0
    xs = 0.5 * (xs - xs[::-1])
    return [point_on_ellipse(float(x), d3, L_tr) for x in xs]
