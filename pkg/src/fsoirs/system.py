"""Physical link description shared by the sweeps and the placement search."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .beam import BeamParams
from .errors import DomainError, ValidityWarning
from .geometry import LinkGeometry
from .gml import (IrsSpec, LensSpec, gml_linear_asymptotic, gml_quadratic_asymptotic,
                  gml_saturated, regime_closed_form, regime_report, relay_hop_gml)
from .oracle import QuadratureSpec, gml_numeric
from .outage import LinkBudget, irs_budget, relay_budget
from .turbulence import TurbulenceModel

# how the IRS GML is obtained at a given size and position
GML_MODELS = ("regime", "exact", "quadratic", "linear", "saturated", "oracle")


@dataclass(frozen=True)
class LinkSystem:
    beam: BeamParams = field(default_factory=lambda: BeamParams(1550e-9, 7e-3))
    lens: LensSpec = field(default_factory=lambda: LensSpec(0.1))
    turbulence: TurbulenceModel = field(default_factory=TurbulenceModel)
    kappa: float = 0.43e-3
    responsivity: float = 1.0
    d3: float = 2000.0
    L_tr: float = 1600.0
    gamma_th: float = 1.0
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not self.d3 > self.L_tr > 0:
            raise DomainError("need d3 > L_tr > 0")
        if self.kappa < 0 or self.responsivity <= 0 or self.gamma_th <= 0:
            raise DomainError("kappa must be >= 0, responsivity and gamma_th > 0")

    def irs_gml(self, L: float, g: LinkGeometry, model: str = "regime") -> float:
        """GML of a square steering IRS of side L placed at geometry g.

        ``regime`` is the piecewise size-scaling map, ``exact`` the unapproximated
        closed form of the active regime, ``quadratic``/``linear``/``saturated``
        force one asymptotic law, ``oracle`` integrates the reflected field.
        """
        irs = IrsSpec.square(L, g)
        if model == "regime":
            return regime_report(irs, self.lens, self.beam, g).gml
        if model == "exact":
            return regime_closed_form(irs, self.lens, self.beam, g)
        if model == "oracle":
            return gml_numeric(irs, self.lens, self.beam, g, self.quadrature)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidityWarning)
            if model == "quadratic":
                return gml_quadratic_asymptotic(irs, self.lens, self.beam, g)
            if model == "linear":
                return gml_linear_asymptotic(irs, self.beam, g)
            if model == "saturated":
                return gml_saturated(self.lens, self.beam, g)
        raise DomainError(f"unknown GML model {model!r}; choose from {GML_MODELS}")

    def irs_budget(self, L: float, g: LinkGeometry, gamma_bar=1.0, model: str = "regime") -> LinkBudget:
        return irs_budget(self.irs_gml(L, g, model), g.d3, self.kappa, self.gamma_th,
                          gamma_bar, self.responsivity)

    def relay_budget(self, g: LinkGeometry, gamma_bar=1.0) -> LinkBudget:
        a = self.lens.radius
        return relay_budget(relay_hop_gml(a, self.beam, g.d1), relay_hop_gml(a, self.beam, g.d2),
                            g.d1, g.d2, self.kappa, self.gamma_th, gamma_bar, self.responsivity)
