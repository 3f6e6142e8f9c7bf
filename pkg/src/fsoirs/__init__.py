"""Power scaling of optical IRSs versus decode-and-forward relays in FSO links."""
from .beam import BeamParams, beamwidth, curvature_radius, incident_field_on_irs
from .errors import DomainError, ResolutionError, ScenarioError, ValidityWarning
from .geometry import LinkGeometry, ellipse_sweep, geometry_from_hop_split, point_on_ellipse
from .gml import (IrsSpec, LensSpec, Regime, RegimeReport, gml_linear, gml_linear_asymptotic,
                  gml_quadratic_asymptotic, gml_quadratic_exact, gml_saturated, regime_closed_form,
                  regime_report, relay_hop_gml)
from .oracle import QuadratureSpec, gml_numeric, reflected_field, sinc_field
from .outage import (LinkBudget, asymptote_irs, asymptote_relay, atmospheric_loss,
                     monte_carlo_outage, outage_irs, outage_relay)
from .placement import PlacementResult, optimal_irs_position, optimal_relay_position, sweep_verify
from .scenario import Scenario, load_scenario
from .system import LinkSystem
from .turbulence import TurbulenceModel, gg_cdf, gg_params, gg_sample, rytov_variance

__version__ = "0.1.0"
