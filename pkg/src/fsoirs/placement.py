"""Where to put the IRS or the relay on the ellipse of constant d1 + d2."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .geometry import (ellipse_height, ellipse_sweep, point_on_ellipse, position_from_hop_split)
from .gml import IrsSpec, LensSpec, Regime, regime_report
from .outage import outage
from .beam import BeamParams
from .system import LinkSystem

TIE_TOLERANCE = 1e-6


@dataclass
class PlacementResult:
    """Optimal node position(s); ``curve`` holds the sweep (x, objective) when one was run."""

    positions: list[tuple[float, float]]
    regime: Optional[Regime]
    objective: float
    closed_form: bool = True
    curve: Optional[tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.positions:
            raise DomainError("placement result must hold at least one position")


def quadratic_optimum_x(d3: float, L_tr: float) -> tuple[float, float]:
    """x positions maximising the quadratic-regime GML along the ellipse."""
    rho1 = 3.0 * L_tr ** 2 - d3 ** 2
    if rho1 < 0:
        raise DomainError("no off-centre optimum when d3^2 > 3 L_tr^2")
    x = math.sqrt(2.0 * rho1) * d3 / (4.0 * L_tr)
    return -x, x


def linear_optimum_x(d3: float, L_tr: float) -> float:
    """x position maximising the linear-regime GML along the ellipse (Tx side)."""
    rho2 = math.sqrt(d3 ** 2 + 24.0 * L_tr ** 2)
    return d3 * (d3 - rho2) / (8.0 * L_tr)


def linear_optimum_hop(d3: float, L_tr: float) -> float:
    """Tx-to-IRS distance of the linear-regime optimum."""
    return (5.0 * d3 - math.sqrt(d3 ** 2 + 24.0 * L_tr ** 2)) / 8.0


def _on_ellipse(x: float, d3: float, L_tr: float) -> tuple[float, float]:
    g = point_on_ellipse(x, d3, L_tr)
    return (x, g.d1 * g.sin_i)


def _gml_curve(irs: IrsSpec, lens: LensSpec, b: BeamParams, d3: float, L_tr: float, n: int):
    geoms = ellipse_sweep(d3, L_tr, n)
    xs = np.array([g.x_o for g in geoms])
    vals = np.array([
        regime_report(IrsSpec.steering(irs.L_x, irs.L_y, g), lens, b, g).gml for g in geoms
    ])
    return xs, vals


def optimal_irs_position(irs: IrsSpec, lens: LensSpec, b: BeamParams, d3: float, L_tr: float,
                         n_fallback: int = 512) -> PlacementResult:
    """Closed-form IRS optimum for the regime active at the symmetric midpoint.

    Large IRSs sit at the apex of the ellipse, mid-size IRSs move towards the
    Tx, and small IRSs have two mirror-image optima near the Tx and the Rx.
    """
    mid = point_on_ellipse(0.0, d3, L_tr)
    rep = regime_report(IrsSpec.steering(irs.L_x, irs.L_y, mid), lens, b, mid)
    if rep.regime is Regime.SATURATED:
        xs = [0.0]
    elif rep.regime is Regime.LINEAR:
        xs = [linear_optimum_x(d3, L_tr)]
    elif 3.0 * L_tr ** 2 >= d3 ** 2:
        xs = list(quadratic_optimum_x(d3, L_tr))
    else:
        # outside the closed form's parameter range: fall back to a GML sweep
        gx, gv = _gml_curve(irs, lens, b, d3, L_tr, n_fallback)
        best = gv.max()
        picks = gx[gv >= best * (1.0 - TIE_TOLERANCE)]
        return PlacementResult([_on_ellipse(x, d3, L_tr) for x in picks], rep.regime, float(best),
                               closed_form=False, curve=(gx, gv))
    positions = [_on_ellipse(x, d3, L_tr) for x in xs]
    g0 = point_on_ellipse(xs[0], d3, L_tr)
    value = regime_report(IrsSpec.steering(irs.L_x, irs.L_y, g0), lens, b, g0).gml
    return PlacementResult(positions, rep.regime, value)


def optimal_relay_position(d3: float, L_tr: float) -> PlacementResult:
    """Decode-and-forward relay optimum: equal hop lengths."""
    return PlacementResult([(0.0, ellipse_height(d3, L_tr))], None, float("nan"))


def sweep_verify(architecture: str, system: LinkSystem, n: int = 512, L: Optional[float] = None,
                 gamma_bar: float = 10 ** 8.4, gml_model: str = "regime") -> PlacementResult:
    """Minimise the exact outage over ``n`` ellipse points.

    Returns every grid point whose outage lies within a relative 1e-6 of the best.
    """
    if n < 64:
        raise DomainError("use at least 64 sweep points")
    if architecture not in ("irs", "relay"):
        raise DomainError(f"unknown architecture {architecture!r}")
    if architecture == "irs" and L is None:
        raise DomainError("IRS sweep needs the IRS side length L")
    geoms = ellipse_sweep(system.d3, system.L_tr, n)
    xs = np.array([g.x_o for g in geoms])
    vals = np.empty(n)
    for i, g in enumerate(geoms):
        if architecture == "irs":
            budget = system.irs_budget(L, g, gamma_bar, gml_model)
        else:
            budget = system.relay_budget(g, gamma_bar)
        vals[i] = float(outage(budget, system.turbulence))
    best = vals.min()
    picks = np.flatnonzero(vals <= best * (1.0 + TIE_TOLERANCE))
    positions = [(float(xs[i]), float(geoms[i].d1 * geoms[i].sin_i)) for i in picks]
    regime = None
    if architecture == "irs":
        g = geoms[picks[0]]
        regime = regime_report(IrsSpec.square(L, g), system.lens, system.beam, g).regime
    return PlacementResult(positions, regime, float(best), closed_form=False, curve=(xs, vals))
