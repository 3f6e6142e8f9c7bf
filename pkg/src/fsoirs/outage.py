"""Outage probability of IRS-assisted and decode-and-forward relay links.

The instantaneous SNR of a path is gamma_bar * gamma_tilde * h_a**2 where
gamma_tilde collects the deterministic factors (responsivity, GML, atmospheric
loss and the share of transmit power).  An IRS link is one path over the
end-to-end distance; a relay link is two paths, each with half of the power,
and fails whenever either hop fails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import optimize, special

from .errors import DomainError
from .turbulence import TurbulenceModel, gg_cdf, gg_sample, named_stream

MC_BLOCK = 1 << 18


def atmospheric_loss(kappa_db_per_m: float, d: float) -> float:
    """Power loss 10^(-kappa d / 10) from absorption and scattering."""
    if kappa_db_per_m < 0 or d <= 0:
        raise DomainError("need kappa >= 0 and d > 0")
    return 10.0 ** (-kappa_db_per_m * d / 10.0)


@dataclass(frozen=True)
class Hop:
    """One optical path: its GML, its length and the fraction of P_tot it carries."""

    gml: float
    distance: float
    h_p: float = 1.0
    power_share: float = 1.0
    responsivity: float = 1.0

    def __post_init__(self):
        if not (self.gml > 0 and self.distance > 0 and 0 < self.h_p <= 1
                and 0 < self.power_share <= 1 and self.responsivity > 0):
            raise DomainError(f"invalid hop {self}")

    @property
    def gamma_tilde(self) -> float:
        return self.power_share * (self.responsivity * self.gml * self.h_p) ** 2


@dataclass(frozen=True)
class LinkBudget:
    """Deterministic part of the SNR for every path plus transmit and threshold SNR."""

    hops: tuple[Hop, ...]
    gamma_th: float
    gamma_bar: float | np.ndarray = 1.0

    def __post_init__(self):
        if self.gamma_th <= 0 or np.any(np.asarray(self.gamma_bar) <= 0):
            raise DomainError("SNR values must be positive")
        if not self.hops:
            raise DomainError("a link needs at least one hop")

    def with_snr(self, gamma_bar) -> "LinkBudget":
        return replace(self, gamma_bar=gamma_bar)


def irs_budget(gml: float, d3: float, kappa: float, gamma_th: float, gamma_bar=1.0,
               responsivity: float = 1.0) -> LinkBudget:
    hop = Hop(gml, d3, atmospheric_loss(kappa, d3), 1.0, responsivity)
    return LinkBudget((hop,), gamma_th, gamma_bar)


def relay_budget(gml1: float, gml2: float, d1: float, d2: float, kappa: float, gamma_th: float,
                 gamma_bar=1.0, responsivity: float = 1.0) -> LinkBudget:
    hops = tuple(
        Hop(g, d, atmospheric_loss(kappa, d), 0.5, responsivity)
        for g, d in ((gml1, d1), (gml2, d2))
    )
    return LinkBudget(hops, gamma_th, gamma_bar)


def db(x):
    return 10.0 * np.log10(x)


def undb(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def _hop_outage(hop: Hop, budget: LinkBudget, tm: TurbulenceModel):
    alpha, beta = tm.params(hop.distance)
    arg = np.sqrt(budget.gamma_th / (np.asarray(budget.gamma_bar, dtype=float) * hop.gamma_tilde))
    return gg_cdf(alpha, beta, arg)


def outage(budget: LinkBudget, tm: TurbulenceModel):
    """1 - prod(1 - F_i(sqrt(gamma_th / (gamma_bar gamma_tilde_i))))."""
    # log1p/expm1 keep the union of tiny hop outages from cancelling to zero
    with np.errstate(divide="ignore"):
        log_survive = sum(np.log1p(-_hop_outage(hop, budget, tm)) for hop in budget.hops)
    return -np.expm1(log_survive)


def outage_irs(budget: LinkBudget, tm: TurbulenceModel):
    if len(budget.hops) != 1:
        raise DomainError("an IRS link has exactly one end-to-end path")
    return outage(budget, tm)


def outage_relay(budget: LinkBudget, tm: TurbulenceModel):
    if len(budget.hops) != 2:
        raise DomainError("a relay link has exactly two hops")
    return outage(budget, tm)


@dataclass(frozen=True)
class AsymptoteReport:
    """High-SNR outage behaviour P_out ~ (C gamma_bar)^(-D)."""

    diversity: float
    coding_gain: float
    rho: tuple[float, ...]
    tau: tuple[float, ...]

    def outage(self, gamma_bar):
        return (self.coding_gain * np.asarray(gamma_bar, dtype=float)) ** (-self.diversity)


def _hop_coding_gain(hop: Hop, gamma_th: float, alpha: float, beta: float, mu: float) -> float:
    rho, tau = min(alpha, beta), max(alpha, beta)
    if math.isclose(rho, tau, rel_tol=1e-12):
        raise DomainError("coding gain needs alpha != beta")
    log_k = (special.gammaln(tau - rho) + rho * math.log(tau * rho / mu)
             - special.gammaln(tau) - special.gammaln(rho + 1.0))
    return hop.gamma_tilde / gamma_th * math.exp(-2.0 / rho * log_k)


def asymptote_irs(budget: LinkBudget, tm: TurbulenceModel) -> AsymptoteReport:
    (hop,) = budget.hops
    alpha, beta = tm.params(hop.distance)
    rho, tau = min(alpha, beta), max(alpha, beta)
    c = _hop_coding_gain(hop, budget.gamma_th, alpha, beta, 1.0)
    return AsymptoteReport(rho / 2.0, c, (rho,), (tau,))


def asymptote_relay(budget: LinkBudget, tm: TurbulenceModel, mu: Sequence[float] = (1.0, 1.0)) -> AsymptoteReport:
    """Relay diversity and coding gain; ``mu`` is the per-hop constant of the coding gain."""
    if len(budget.hops) != 2:
        raise DomainError("a relay link has exactly two hops")
    params = [tm.params(h.distance) for h in budget.hops]
    rhos = tuple(min(p) for p in params)
    taus = tuple(max(p) for p in params)
    gains = [_hop_coding_gain(h, budget.gamma_th, *p, m) for h, p, m in zip(budget.hops, params, mu)]
    d = min(rhos) / 2.0
    if math.isclose(rhos[0], rhos[1], rel_tol=1e-12):
        c = sum(g ** (-d) for g in gains) ** (-1.0 / d)
    else:
        c = gains[int(np.argmin(rhos))]
    return AsymptoteReport(d, c, rhos, taus)


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: np.ndarray
    stderr: np.ndarray
    trials: int


def _margin_blocks(budget: LinkBudget, tm: TurbulenceModel, trials: int, seed: int, tag: str):
    """Yield, block by block, min over hops of h_a,i / sqrt(gamma_th / gamma_tilde_i).

    A trial is in outage at transmit SNR gamma_bar exactly when this margin is
    below 1/sqrt(gamma_bar), so one set of draws serves the whole SNR grid.
    """
    params = [tm.params(h.distance) for h in budget.hops]
    scales = [math.sqrt(budget.gamma_th / h.gamma_tilde) for h in budget.hops]
    for block, start in enumerate(range(0, trials, MC_BLOCK)):
        n = min(MC_BLOCK, trials - start)
        margin = np.full(n, np.inf)
        for i, ((alpha, beta), scale) in enumerate(zip(params, scales)):
            rng = named_stream(seed, f"{tag}/hop{i}/block{block}")
            np.minimum(margin, gg_sample(alpha, beta, rng, n) / scale, out=margin)
        yield margin


def monte_carlo_outage(architecture: str, budget: LinkBudget, tm: TurbulenceModel,
                       trials: int = 1_000_000, seed: int = 0) -> MonteCarloResult:
    """Empirical outage with its binomial standard error at every gamma_bar of the budget.

    Draws are shared across the SNR grid and generated in fixed-size blocks, each
    from its own named stream, so memory stays flat and results are reproducible.
    """
    expected = {"irs": 1, "relay": 2}
    if architecture not in expected:
        raise DomainError(f"unknown architecture {architecture!r}")
    if len(budget.hops) != expected[architecture]:
        raise DomainError(f"{architecture} budget must have {expected[architecture]} hop(s)")
    if trials < 10_000:
        raise DomainError("use at least 1e4 trials")
    thresholds = 1.0 / np.sqrt(np.asarray(budget.gamma_bar, dtype=float))
    counts = np.zeros(thresholds.shape, dtype=np.int64)
    for margin in _margin_blocks(budget, tm, trials, seed, architecture):
        counts += np.searchsorted(np.sort(margin), thresholds, side="left")
    p = counts / trials
    return MonteCarloResult(p, np.sqrt(p * (1.0 - p) / trials), trials)


def snr_at_outage(budget: LinkBudget, tm: TurbulenceModel, target: float,
                  lo_db: float = -50.0, hi_db: float = 300.0) -> float:
    """Transmit SNR (linear) at which the analytic outage equals ``target``."""
    if not 0 < target < 1:
        raise DomainError("target outage must lie in (0, 1)")
    f = lambda x: math.log(max(float(outage(budget.with_snr(10.0 ** (x / 10.0)), tm)), 1e-300)) - math.log(target)
    return 10.0 ** (optimize.brentq(f, lo_db, hi_db, xtol=1e-10) / 10.0)
