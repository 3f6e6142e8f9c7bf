import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsoirs.errors import DomainError
from fsoirs.outage import (Hop, LinkBudget, asymptote_irs, asymptote_relay, atmospheric_loss, db,
                           irs_budget, monte_carlo_outage, outage, outage_irs, outage_relay,
                           relay_budget, snr_at_outage, undb)
from fsoirs.turbulence import TurbulenceModel, gg_cdf

TM = TurbulenceModel()
KAPPA = 0.43e-3
G3_7MM = 0.625393  # lens-limited GML at the apex for a 7 mm waist
HOP_7MM = 0.975482  # relay hop GML over 1 km for a 7 mm waist


def fig3_irs(gamma_bar=1.0, gamma_th=1.0):
    return irs_budget(G3_7MM, 2000.0, KAPPA, gamma_th, gamma_bar)


def fig3_relay(gamma_bar=1.0, gamma_th=1.0):
    return relay_budget(HOP_7MM, HOP_7MM, 1000.0, 1000.0, KAPPA, gamma_th, gamma_bar)


def local_slope(budget, lo_db, hi_db):
    p = [float(outage(budget.with_snr(undb(s)), TM)) for s in (lo_db, hi_db)]
    return math.log10(p[1] / p[0]) / ((hi_db - lo_db) / 10)


def test_atmospheric_loss():
    assert atmospheric_loss(KAPPA, 2000.0) == pytest.approx(10 ** -0.086)
    assert atmospheric_loss(KAPPA, 2000.0) == pytest.approx(0.820, abs=1e-3)
    assert atmospheric_loss(0.0, 2000.0) == 1.0
    assert atmospheric_loss(KAPPA, 700.0) * atmospheric_loss(KAPPA, 1300.0) == pytest.approx(
        atmospheric_loss(KAPPA, 2000.0))


def test_irs_outage_is_cdf_of_threshold():
    b = fig3_irs(undb(70.0))
    x = math.sqrt(1.0 / (undb(70.0) * b.hops[0].gamma_tilde))
    assert outage_irs(b, TM) == pytest.approx(gg_cdf(*TM.params(2000.0), x), rel=1e-12)
    assert outage_irs(fig3_irs(1e300), TM) < 1e-100


@pytest.mark.parametrize("make", [fig3_irs, fig3_relay], ids=["irs", "relay"])
def test_monte_carlo_agreement(make):
    snr = undb(np.array([40.0, 50.0, 60.0, 80.0, 100.0]))
    b = make(snr)
    arch = "irs" if len(b.hops) == 1 else "relay"
    p = outage(b, TM)
    mc = monte_carlo_outage(arch, b, TM, 1_000_000, seed=3)
    assert np.all(np.abs(mc.estimate - p) <= 3 * np.sqrt(p * (1 - p) / 1e6))


def test_high_snr_slopes():
    d_irs = min(TM.params(2000.0)) / 2
    d_rel = min(TM.params(1000.0)) / 2
    s_irs = local_slope(fig3_irs(), 180.0, 200.0)
    s_rel = local_slope(fig3_relay(), 180.0, 200.0)
    assert s_irs == pytest.approx(-d_irs, rel=0.05)
    assert s_rel == pytest.approx(-d_rel, rel=0.05)
    assert s_rel / s_irs == pytest.approx(1.9, abs=0.1)


def test_identical_hops_combine():
    b = fig3_relay(undb(50.0))
    single = LinkBudget(b.hops[:1], b.gamma_th, b.gamma_bar)
    f = float(outage(single, TM))
    assert outage_relay(b, TM) == pytest.approx(2 * f - f * f, rel=1e-12)


def test_perfect_hop_leaves_other():
    b = fig3_relay(undb(50.0))
    strong = Hop(1e12, 1000.0, 1.0, 0.5)
    mixed = LinkBudget((b.hops[0], strong), b.gamma_th, b.gamma_bar)
    single = LinkBudget(b.hops[:1], b.gamma_th, b.gamma_bar)
    assert outage_relay(mixed, TM) == pytest.approx(float(outage(single, TM)), rel=1e-9)


def test_irs_asymptote():
    b = fig3_irs()
    a = asymptote_irs(b, TM)
    assert a.diversity == pytest.approx(min(TM.params(2000.0)) / 2)
    for snr_db in (110.0, 140.0, 170.0):
        exact = float(outage_irs(b.with_snr(undb(snr_db)), TM))
        assert exact <= 1e-4
        assert float(a.outage(undb(snr_db))) == pytest.approx(exact, rel=0.10)
    doubled = irs_budget(G3_7MM * math.sqrt(2), 2000.0, KAPPA, 1.0)
    assert asymptote_irs(doubled, TM).coding_gain == pytest.approx(2 * a.coding_gain)


def test_relay_asymptote_branches():
    sym = asymptote_relay(fig3_relay(), TM)
    d = sym.diversity
    assert d == pytest.approx(min(TM.params(1000.0)) / 2)
    assert sym.rho[0] == sym.rho[1]
    asym = asymptote_relay(relay_budget(HOP_7MM, HOP_7MM, 1300.0, 700.0, KAPPA, 1.0), TM)
    assert asym.diversity == pytest.approx(min(TM.params(1300.0)) / 2)
    # the asymptote tracks the exact curve on both branches
    for budget, rep in ((fig3_relay(), sym), (relay_budget(HOP_7MM, HOP_7MM, 1300.0, 700.0, KAPPA, 1.0), asym)):
        exact = float(outage_relay(budget.with_snr(undb(200.0)), TM))
        assert float(rep.outage(undb(200.0))) == pytest.approx(exact, rel=0.05)


def test_symmetric_relay_coding_gain_combines_hops():
    sym = asymptote_relay(fig3_relay(), TM)
    one = asymptote_irs(LinkBudget(fig3_relay().hops[:1], 1.0), TurbulenceModel())
    # the single-hop form over 1 km uses the 1 km parameters through the hop distance
    assert sym.coding_gain == pytest.approx(2 ** (-1 / sym.diversity) * one.coding_gain, rel=1e-12)


class _EqualShapes:
    def params(self, d):
        return 2.0, 2.0


def test_equal_shapes_rejected():
    with pytest.raises(DomainError):
        asymptote_irs(fig3_irs(), _EqualShapes())


def test_monte_carlo_edge_cases():
    b = fig3_irs(undb(np.array([150.0])), gamma_th=undb(-100.0))
    assert monte_carlo_outage("irs", b, TM, 10_000, seed=1).estimate[0] == 0.0
    r1 = monte_carlo_outage("irs", fig3_irs(undb(60.0)), TM, 50_000, seed=5)
    r2 = monte_carlo_outage("irs", fig3_irs(undb(60.0)), TM, 50_000, seed=5)
    assert np.array_equal(r1.estimate, r2.estimate)
    with pytest.raises(DomainError):
        monte_carlo_outage("irs", fig3_irs(), TM, 100)
    with pytest.raises(DomainError):
        monte_carlo_outage("relay", fig3_irs(), TM, 10_000)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 150.0), st.floats(1.0, 20.0), st.floats(-20.0, 30.0))
def test_outage_properties(snr_db, step_db, th_db):
    lo, hi = undb(snr_db), undb(snr_db + step_db)
    for make in (fig3_irs, fig3_relay):
        p_lo = float(outage(make(lo, undb(th_db)), TM))
        p_hi = float(outage(make(hi, undb(th_db)), TM))
        p_th = float(outage(make(lo, undb(th_db + step_db)), TM))
        assert 0 <= p_hi <= p_lo <= 1
        assert p_th >= p_lo
    b = fig3_relay(lo, undb(th_db))
    singles = [float(outage(LinkBudget((h,), b.gamma_th, b.gamma_bar), TM)) for h in b.hops]
    p = float(outage_relay(b, TM))
    assert max(singles) * (1 - 1e-12) <= p <= sum(singles) * (1 + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(200.0, 10_000.0))
def test_relay_diversity_exceeds_irs(d3):
    assert min(TM.params(d3 / 2)) > min(TM.params(d3))


def test_snr_at_outage_inverts():
    b = fig3_irs()
    g = snr_at_outage(b, TM, 1e-3)
    assert float(outage_irs(b.with_snr(g), TM)) == pytest.approx(1e-3, rel=1e-8)
    assert db(g) == pytest.approx(54.29, abs=0.01)
