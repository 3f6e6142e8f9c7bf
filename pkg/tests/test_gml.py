import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from fsoirs.beam import BeamParams, beamwidth, incident_field_on_irs
from fsoirs.errors import ValidityWarning
from fsoirs.geometry import point_on_ellipse
from fsoirs.gml import (IrsSpec, LensSpec, Regime, boundary_sizes, equivalent_beamwidths,
                        gml_linear, gml_linear_asymptotic, gml_quadratic_asymptotic,
                        gml_quadratic_exact, gml_saturated, regime_report, relay_hop_gml)

pytestmark = pytest.mark.filterwarnings("ignore::fsoirs.errors.ValidityWarning")


def test_boundary_sizes_fig2(beam25, lens, apex):
    rep = regime_report(IrsSpec.square(1e-3, apex), lens, beam25, apex)
    assert rep.three_branch
    assert math.sqrt(rep.S1) == pytest.approx(0.011290, rel=1e-4)
    assert math.sqrt(rep.S2) == pytest.approx(0.11068, rel=1e-4)
    assert rep.S3 is None
    assert rep.regime is Regime.QUADRATIC


def test_electrical_size_makes_s1_small(lens, apex, beam25):
    assert lens.area / 1550e-9**2 == pytest.approx(1.31e10, rel=0.01)
    s1, *_ = boundary_sizes(lens, beam25, apex)
    assert s1 < 1e-3


def test_saturated_values(beam25, lens, apex):
    wx, wy = equivalent_beamwidths(beam25, apex)
    assert wx == pytest.approx(0.3947, rel=1e-3)
    assert wy == pytest.approx(wx, rel=1e-12)
    assert gml_saturated(lens, beam25, apex) == pytest.approx(0.12013, rel=1e-4)
    assert gml_saturated(LensSpec(100.0), beam25, apex) == pytest.approx(1.0)


def test_relay_hop_against_square_capture(beam7):
    # Gaussian power through the square of equal area (side a sqrt(pi))
    a, d = 0.1, 1000.0
    w = beamwidth(beam7, d)
    h = a * math.sqrt(math.pi) / 2
    dens = lambda y, x: 2 / (math.pi * w * w) * math.exp(-2 * (x * x + y * y) / w**2)
    ref, _ = integrate.dblquad(dens, -h, h, -h, h, epsrel=1e-11)
    assert relay_hop_gml(a, beam7, d) == pytest.approx(ref, rel=1e-9)
    assert relay_hop_gml(a, beam7, d) == pytest.approx(0.97548, rel=1e-4)


def test_relay_hop_limits(beam7):
    assert relay_hop_gml(100.0, beam7, 1000.0) == 1.0
    w = beamwidth(beam7, 1000.0)
    a = 1e-5
    assert relay_hop_gml(a, beam7, 1000.0) == pytest.approx(2 * a * a / w**2, rel=1e-6)


def test_quadratic_forms_converge_for_small_irs(beam25, lens, apex):
    ratio = lambda L: (gml_quadratic_asymptotic(IrsSpec.square(L, apex), lens, beam25, apex)
                       / gml_quadratic_exact(IrsSpec.square(L, apex), lens, beam25, apex))
    assert ratio(1e-3) == pytest.approx(1.0, abs=0.01)
    # the asymptote drifts upward as the IRS grows (57% at 1 cm)
    r = [ratio(L) for L in (1e-3, 3e-3, 1e-2)]
    assert r == sorted(r)
    assert r[-1] == pytest.approx(1.5746, rel=1e-3)


def test_linear_forms_agree_at_3cm(beam25, apex):
    irs = IrsSpec.square(0.03, apex)
    assert gml_linear_asymptotic(irs, beam25, apex) == pytest.approx(gml_linear(irs, beam25, apex), rel=0.02)


def test_linear_slope_in_area(beam25, apex):
    L = np.array([0.02, 0.08])
    g = [gml_linear(IrsSpec.square(v, apex), beam25, apex) for v in L]
    slope = math.log(g[1] / g[0]) / math.log((L[1] / L[0]) ** 2)
    assert slope == pytest.approx(1.0, rel=0.05)


def test_linear_is_intercepted_power(beam25, apex):
    L = 0.05
    f = lambda y, x: incident_field_on_irs(beam25, apex, x, y).amplitude ** 2 / (2 * 377)
    p, _ = integrate.dblquad(f, -L / 2, L / 2, -L / 2, L / 2, epsrel=1e-12)
    assert gml_linear(IrsSpec.square(L, apex), beam25, apex) == pytest.approx(p / beam25.power, rel=1e-6)


def test_scaling_with_area(beam25, lens, apex):
    small, big = IrsSpec(1e-3, 1e-3), IrsSpec(2e-3, 1e-3)
    assert gml_quadratic_asymptotic(big, lens, beam25, apex) == pytest.approx(
        4 * gml_quadratic_asymptotic(small, lens, beam25, apex))
    assert gml_linear_asymptotic(big, beam25, apex) == pytest.approx(
        2 * gml_linear_asymptotic(small, beam25, apex))


def test_grazing_incidence_kills_linear_gain(beam25):
    g = point_on_ellipse(999.9999, 2000.0, 1600.0)
    assert g.sin_i < 1e-3
    assert gml_linear_asymptotic(IrsSpec.square(0.03, g), beam25, g) < 1e-5


def test_quadratic_asymptote_swap_symmetry(beam25, lens):
    # exchanging (d1, theta_i, w_o) with (d2, theta_r, a) leaves G1 unchanged
    g = point_on_ellipse(-400.0, 2000.0, 1600.0)
    irs = IrsSpec.square(5e-3, g)
    swapped = gml_quadratic_asymptotic(irs, LensSpec(beam25.waist), BeamParams(1550e-9, lens.radius), g.mirrored())
    assert swapped == pytest.approx(gml_quadratic_asymptotic(irs, lens, beam25, g), rel=1e-12)


def test_validity_warning_outside_small_irs(beam25, lens, apex):
    with pytest.warns(ValidityWarning):
        warnings.simplefilter("always")
        gml_quadratic_exact(IrsSpec.square(0.2, apex), lens, beam25, apex)


@pytest.mark.parametrize("which", ["S1", "S2"])
def test_continuity_three_branch(beam25, lens, apex, which):
    s1, s2, _, three = boundary_sizes(lens, beam25, apex)
    assert three
    irs = IrsSpec.square(math.sqrt(s1 if which == "S1" else s2), apex)
    lin = gml_linear_asymptotic(irs, beam25, apex)
    other = (gml_quadratic_asymptotic(irs, lens, beam25, apex) if which == "S1"
             else gml_saturated(lens, beam25, apex))
    assert abs(lin - other) / other < 1e-9


def test_continuity_two_branch(beam7, apex):
    small_lens = LensSpec(0.01)
    s1, s2, s3, three = boundary_sizes(small_lens, beam7, apex)
    assert not three
    rep = regime_report(IrsSpec.square(1e-3, apex), small_lens, beam7, apex)
    assert rep.S2 is None and rep.S3 == pytest.approx(s3)
    irs = IrsSpec.square(math.sqrt(s3), apex)
    g1 = gml_quadratic_asymptotic(irs, small_lens, beam7, apex)
    g3 = gml_saturated(small_lens, beam7, apex)
    assert abs(g1 - g3) / g3 < 1e-9


@pytest.mark.parametrize("beam", ["beam25", "beam7"])
def test_regime_map_monotone_and_bounded(beam, lens, apex, request):
    b = request.getfixturevalue(beam)
    vals = [regime_report(IrsSpec.square(L, apex), lens, b, apex).gml for L in np.geomspace(1e-3, 1, 300)]
    assert np.all(np.diff(vals) >= -1e-15 * np.max(vals))
    assert 0 <= min(vals) and max(vals) <= 1


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 2.0), st.floats(-990.0, 990.0), st.sampled_from([2.5e-3, 7e-3]))
def test_all_closed_forms_in_unit_interval(L, x, waist):
    g = point_on_ellipse(x, 2000.0, 1600.0)
    b = BeamParams(1550e-9, waist)
    lens = LensSpec(0.1)
    irs = IrsSpec.square(L, g)
    rep = regime_report(irs, lens, b, g)
    for v in (rep.gml, gml_linear(irs, b, g), gml_saturated(lens, b, g)):
        assert 0 <= v <= 1
