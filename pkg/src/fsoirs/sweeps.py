"""The three experiment sweeps plus the placement comparison."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ResolutionError, ValidityWarning
from .geometry import point_on_ellipse
from .gml import (IrsSpec, gml_linear, gml_linear_asymptotic, gml_quadratic_asymptotic,
                  gml_quadratic_exact, gml_saturated, regime_report)
from .oracle import gml_numeric_report
from .outage import (asymptote_irs, asymptote_relay, db, monte_carlo_outage, outage, snr_at_outage,
                     undb)
from .placement import optimal_irs_position, optimal_relay_position, sweep_verify
from .scenario import Scenario


@dataclass
class SweepResult:
    """Tabular sweep output in a fixed column order, plus scalar annotations."""

    kind: str
    variable: str
    columns: dict[str, np.ndarray]
    annotations: dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.columns[self.variable])
        n = grid.size
        for name, col in self.columns.items():
            if len(col) != n:
                raise ValueError(f"column {name} has {len(col)} rows, expected {n}")
        if grid.dtype.kind == "f" and n > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("sweep grid must be strictly increasing")


def _size_label(L: float) -> str:
    return f"{L * 100:g}cm" if L >= 0.01 else f"{L * 1000:g}mm"


def run_size_sweep(s: Scenario, grid: Optional[Sequence[float]] = None, oracle: bool = False) -> SweepResult:
    """GML of a square IRS at the ellipse apex versus its side length."""
    sysm = s.system()
    b, lens = sysm.beam, sysm.lens
    g = point_on_ellipse(0.0, s.d3, s.L_tr)
    Ls = np.geomspace(s.size_min, s.size_max, s.size_points) if grid is None else np.asarray(grid, float)
    cols = {k: [] for k in ("L", "gml", "regime", "G1", "G1_exact", "G2", "G2_exact", "G3")}
    if oracle:
        cols.update(oracle=[], oracle_rel_change=[])
    rep = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        for L in Ls:
            irs = IrsSpec.square(L, g)
            rep = regime_report(irs, lens, b, g)
            cols["L"].append(L)
            cols["gml"].append(rep.gml)
            cols["regime"].append(rep.regime.value)
            cols["G1"].append(gml_quadratic_asymptotic(irs, lens, b, g))
            cols["G1_exact"].append(gml_quadratic_exact(irs, lens, b, g))
            cols["G2"].append(gml_linear_asymptotic(irs, b, g))
            cols["G2_exact"].append(gml_linear(irs, b, g))
            cols["G3"].append(gml_saturated(lens, b, g))
            if oracle:
                res = gml_numeric_report(irs, lens, b, g, sysm.quadrature)
                cols["oracle"].append(res.value)
                cols["oracle_rel_change"].append(res.relative_change)
    notes = {"sqrt_S1": math.sqrt(rep.S1)}
    if rep.three_branch:
        notes["sqrt_S2"] = math.sqrt(rep.S2)
    else:
        notes["sqrt_S3"] = math.sqrt(rep.S3)
    return SweepResult("size", "L", {k: np.asarray(v) for k, v in cols.items()}, notes)


def run_snr_sweep(s: Scenario, grid_db: Optional[Sequence[float]] = None,
                  sizes: Optional[Sequence[float]] = None, monte_carlo: bool = True) -> SweepResult:
    """Outage versus transmit SNR for the relay and each IRS size, at the ellipse apex."""
    sysm = s.system()
    tm = sysm.turbulence
    g = point_on_ellipse(0.0, s.d3, s.L_tr)
    snr_db = s.snr_grid_db() if grid_db is None else np.asarray(grid_db, float)
    gb = undb(snr_db)
    sizes = s.irs_sizes if sizes is None else tuple(sizes)
    variants = [("relay", "relay", sysm.relay_budget(g, gb))]
    variants += [(f"irs_{_size_label(L)}", "irs", sysm.irs_budget(L, g, gb, s.gml_model)) for L in sizes]
    cols = {"snr_db": snr_db}
    notes: dict[str, object] = {}
    for name, arch, budget in variants:
        cols[f"{name}_outage"] = np.asarray(outage(budget, tm))
        asym = asymptote_relay(budget, tm) if arch == "relay" else asymptote_irs(budget, tm)
        cols[f"{name}_asymptote"] = asym.outage(gb)
        notes[f"{name}_diversity"] = asym.diversity
        if monte_carlo:
            mc = monte_carlo_outage(arch, budget, tm, s.trials, s.seed)
            cols[f"{name}_mc"] = mc.estimate
            cols[f"{name}_mc_stderr"] = mc.stderr
        notes[f"{name}_snr_at_outage_db"] = float(db(snr_at_outage(budget, tm, s.outage_level)))
    irs_names = [v[0] for v in variants[1:]]
    if irs_names:
        notes["diversity_ratio"] = notes["relay_diversity"] / notes[f"{irs_names[0]}_diversity"]
    for a, c in zip(irs_names, irs_names[1:]):
        notes[f"gain_{a}_to_{c}_db"] = notes[f"{a}_snr_at_outage_db"] - notes[f"{c}_snr_at_outage_db"]
    return SweepResult("snr", "snr_db", cols, notes)


def run_position_sweep(s: Scenario, n: Optional[int] = None) -> SweepResult:
    """Exact outage versus the x coordinate of the node on the ellipse."""
    sysm = s.system()
    n = s.position_points if n is None else n
    gamma_bar = undb(s.gamma_bar_db)
    relay = sweep_verify("relay", sysm, n, gamma_bar=gamma_bar)
    xs = relay.curve[0]
    cols = {"x": xs, "relay_outage": relay.curve[1]}
    notes: dict[str, object] = {
        "relay_sweep_x": [p[0] for p in relay.positions],
        "relay_closed_form_x": [p[0] for p in optimal_relay_position(s.d3, s.L_tr).positions],
    }
    g0 = point_on_ellipse(0.0, s.d3, s.L_tr)
    for L in s.irs_sizes:
        name = f"irs_{_size_label(L)}"
        res = sweep_verify("irs", sysm, n, L=L, gamma_bar=gamma_bar, gml_model=s.gml_model)
        cols[f"{name}_outage"] = res.curve[1]
        cf = optimal_irs_position(IrsSpec.square(L, g0), sysm.lens, sysm.beam, s.d3, s.L_tr)
        notes[f"{name}_sweep_x"] = [p[0] for p in res.positions]
        notes[f"{name}_closed_form_x"] = [p[0] for p in cf.positions]
        notes[f"{name}_regime"] = cf.regime.value
    notes["grid_step"] = float(xs[1] - xs[0])
    return SweepResult("position", "x", cols, notes)


def run_placement(s: Scenario, n: Optional[int] = None) -> SweepResult:
    """Closed-form optima against sweep argmins, one row per node type."""
    pos = run_position_sweep(s, n)
    step = pos.annotations["grid_step"]
    names = ["relay"] + [f"irs_{_size_label(L)}" for L in s.irs_sizes]
    cols = {"variant": [], "closed_form_x": [], "sweep_x": [], "max_offset": [], "within_step": []}
    for i, name in enumerate(names):
        cf = sorted(pos.annotations[f"{name}_closed_form_x"])
        sw = sorted(pos.annotations[f"{name}_sweep_x"])
        offset = max(min(abs(c - w) for w in sw) for c in cf)
        cols["variant"].append(name)
        cols["closed_form_x"].append(";".join(f"{v:.3f}" for v in cf))
        cols["sweep_x"].append(";".join(f"{v:.3f}" for v in sw))
        cols["max_offset"].append(offset)
        cols["within_step"].append(int(offset <= step))
    out = SweepResult("placement", "variant", {k: np.asarray(v) for k, v in cols.items()},
                      {"grid_step": step})
    out.annotations["position_sweep"] = pos
    return out


VALIDATION_SIZES = (0.01, 0.03, 0.3, 1.0)


def run_validation(s: Scenario, sizes: Sequence[float] = VALIDATION_SIZES, tolerance: float = 0.10) -> SweepResult:
    """Wave-oracle GML against the closed form of the active regime."""
    sysm = s.system()
    g = point_on_ellipse(0.0, s.d3, s.L_tr)
    cols = {k: [] for k in ("L", "regime", "closed_form", "oracle", "rel_error", "rel_change", "passed")}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        for L in sizes:
            irs = IrsSpec.square(L, g)
            rep = regime_report(irs, sysm.lens, sysm.beam, g)
            cf = {"quadratic": gml_quadratic_exact(irs, sysm.lens, sysm.beam, g),
                  "linear": gml_linear(irs, sysm.beam, g)}.get(rep.regime.value, rep.gml)
            res = gml_numeric_report(irs, sysm.lens, sysm.beam, g, sysm.quadrature)
            err = abs(res.value - cf) / cf
            ok = err <= tolerance and res.relative_change <= sysm.quadrature.refinement_tolerance
            for k, v in zip(cols, (L, rep.regime.value, cf, res.value, err, res.relative_change, int(ok))):
                cols[k].append(v)
    return SweepResult("validate", "L", {k: np.asarray(v) for k, v in cols.items()},
                       {"tolerance": tolerance, "all_passed": all(cols["passed"])})
