"""Scenario files: INI sections per subsystem, explicit units, named presets."""
from __future__ import annotations

import configparser
import hashlib
import re
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .beam import BeamParams
from .errors import DomainError, ScenarioError
from .gml import LensSpec
from .oracle import QuadratureSpec
from .system import GML_MODELS, LinkSystem
from .turbulence import TurbulenceModel

_LENGTH = {"": 1.0, "m": 1.0, "km": 1e3, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}
_POWER = {"": 1.0, "w": 1.0, "mw": 1e-3, "uw": 1e-6}
_ATTEN = {"": 1.0, "db/m": 1.0, "db/km": 1e-3}
_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/]*)\s*$")

# (section, key) -> (Scenario field, kind, default text)
SCHEMA: dict[tuple[str, str], tuple[str, str, str]] = {
    ("laser", "wavelength"): ("wavelength", "length", "1550nm"),
    ("laser", "waist"): ("waist", "length", "7mm"),
    ("laser", "power"): ("power", "power", "1mW"),
    ("laser", "impedance"): ("impedance", "float", "377"),
    ("receiver", "lens_radius"): ("lens_radius", "length", "10cm"),
    ("receiver", "responsivity"): ("responsivity", "float", "1"),
    ("channel", "cn2"): ("cn2", "float", "50e-15"),
    ("channel", "kappa"): ("kappa", "attenuation", "0.43dB/km"),
    ("geometry", "d3"): ("d3", "length", "2km"),
    ("geometry", "L_tr"): ("L_tr", "length", "1.6km"),
    ("irs", "sizes"): ("irs_sizes", "lengths", "1cm, 7cm, 1m"),
    ("irs", "gml_model"): ("gml_model", "str", "regime"),
    ("link", "gamma_th"): ("gamma_th_db", "db", "0dB"),
    ("link", "gamma_bar"): ("gamma_bar_db", "db", "84dB"),
    ("link", "snr_min"): ("snr_min_db", "db", "20dB"),
    ("link", "snr_max"): ("snr_max_db", "db", "160dB"),
    ("link", "snr_step"): ("snr_step_db", "db", "5dB"),
    ("link", "outage_level"): ("outage_level", "float", "1e-3"),
    ("sweep", "size_min"): ("size_min", "length", "1mm"),
    ("sweep", "size_max"): ("size_max", "length", "1m"),
    ("sweep", "size_points"): ("size_points", "int", "121"),
    ("sweep", "position_points"): ("position_points", "int", "512"),
    ("montecarlo", "trials"): ("trials", "int", "1000000"),
    ("montecarlo", "seed"): ("seed", "int", "0"),
    ("quadrature", "irs_samples_per_axis"): ("irs_samples_per_axis", "int", "32"),
    ("quadrature", "lens_samples_per_axis"): ("lens_samples_per_axis", "int", "32"),
    ("quadrature", "oversampling_factor"): ("oversampling_factor", "float", "4"),
    ("quadrature", "refinement_tolerance"): ("refinement_tolerance", "float", "0.01"),
    ("quadrature", "chebyshev_nodes"): ("chebyshev_nodes", "int", "12"),
}

PRESETS: dict[str, str] = {
    "fig2": "[laser]\nwaist = 2.5mm\n[irs]\nsizes = 1cm, 3cm, 30cm, 1m\n",
    "fig3": "[laser]\nwaist = 7mm\n[link]\ngamma_th = 0dB\n[irs]\nsizes = 1cm, 7cm, 1m\n",
    "fig4a": "[laser]\nwaist = 7mm\n[link]\ngamma_th = 30dB\ngamma_bar = 84dB\n[irs]\nsizes = 3cm, 1m\n",
    "fig4b": "[laser]\nwaist = 7mm\n[link]\ngamma_th = -50dB\ngamma_bar = 84dB\n[irs]\nsizes = 1mm\n",
}


def _scaled(text: str, table: dict[str, float], what: str) -> float:
    m = _NUMBER.match(text)
    if not m:
        raise ScenarioError(f"cannot read {what} value {text!r}")
    unit = m.group(2).lower()
    if unit not in table:
        raise ScenarioError(f"unknown {what} unit {m.group(2)!r} in {text!r}")
    return float(m.group(1)) * table[unit]


def _convert(kind: str, text: str):
    if kind == "length":
        return _scaled(text, _LENGTH, "length")
    if kind == "lengths":
        return tuple(_scaled(t, _LENGTH, "length") for t in text.split(",") if t.strip())
    if kind == "power":
        m = _NUMBER.match(text)
        if m and m.group(2).lower() == "dbm":
            return 1e-3 * 10.0 ** (float(m.group(1)) / 10.0)
        return _scaled(text, _POWER, "power")
    if kind == "attenuation":
        return _scaled(text, _ATTEN, "attenuation")
    if kind == "db":
        return _scaled(text, {"db": 1.0}, "decibel")
    if kind == "int":
        try:
            return int(text.strip())
        except ValueError:
            raise ScenarioError(f"expected an integer, got {text!r}") from None
    if kind == "float":
        return _scaled(text, {"": 1.0}, "numeric")
    return text.strip()


@dataclass(frozen=True)
class Scenario:
    wavelength: float
    waist: float
    power: float
    impedance: float
    lens_radius: float
    responsivity: float
    cn2: float
    kappa: float
    d3: float
    L_tr: float
    irs_sizes: tuple[float, ...]
    gml_model: str
    gamma_th_db: float
    gamma_bar_db: float
    snr_min_db: float
    snr_max_db: float
    snr_step_db: float
    outage_level: float
    size_min: float
    size_max: float
    size_points: int
    position_points: int
    trials: int
    seed: int
    irs_samples_per_axis: int
    lens_samples_per_axis: int
    oversampling_factor: float
    refinement_tolerance: float
    chebyshev_nodes: int
    raw: tuple[tuple[str, str], ...] = ()
    defaulted: tuple[str, ...] = ()

    def beam(self) -> BeamParams:
        return BeamParams(self.wavelength, self.waist, self.power, self.impedance)

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(self.irs_samples_per_axis, self.lens_samples_per_axis,
                              self.oversampling_factor, self.refinement_tolerance,
                              self.chebyshev_nodes)

    def system(self) -> LinkSystem:
        return LinkSystem(
            beam=self.beam(),
            lens=LensSpec(self.lens_radius, self.responsivity),
            turbulence=TurbulenceModel(self.cn2, self.wavelength),
            kappa=self.kappa,
            responsivity=self.responsivity,
            d3=self.d3,
            L_tr=self.L_tr,
            gamma_th=10.0 ** (self.gamma_th_db / 10.0),
            quadrature=self.quadrature(),
        )

    def snr_grid_db(self) -> np.ndarray:
        n = int(round((self.snr_max_db - self.snr_min_db) / self.snr_step_db)) + 1
        return self.snr_min_db + self.snr_step_db * np.arange(n)

    def echo(self) -> str:
        """Canonical ``section.key = value`` listing; defaulted entries are marked."""
        lines = []
        for name, text in self.raw:
            mark = "  # default" if name in self.defaulted else ""
            lines.append(f"{name} = {text}{mark}")
        return "\n".join(lines)

    def digest(self) -> str:
        body = "\n".join(f"{k} = {v}" for k, v in self.raw)
        return hashlib.sha256(body.encode("utf-8")).hexdigest()[:16]

    def validate(self) -> None:
        try:
            self.system()
        except DomainError as exc:
            raise ScenarioError(f"invalid scenario: {exc}") from None
        checks = [
            (all(L > 0 for L in self.irs_sizes) and len(self.irs_sizes) > 0, "IRS sizes must be positive"),
            (self.gml_model in GML_MODELS, f"gml_model must be one of {GML_MODELS}"),
            (self.snr_step_db > 0 and self.snr_max_db > self.snr_min_db, "SNR grid must be increasing"),
            (0 < self.outage_level < 1, "outage_level must lie in (0, 1)"),
            (0 < self.size_min < self.size_max and self.size_points >= 2, "size grid must be increasing"),
            (self.position_points >= 64, "position_points must be at least 64"),
            (self.trials >= 10_000, "trials must be at least 1e4"),
            (self.seed >= 0, "seed must be non-negative"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ScenarioError(f"invalid scenario: {msg}")


def _read_ini(text: str, origin: str) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=origin)
    except configparser.Error as exc:
        raise ScenarioError(f"{origin}: {exc}") from None
    known = {(s, k) for s, k in SCHEMA}
    values = {}
    for section in parser.sections():
        for key, val in parser.items(section):
            if (section, key) not in known:
                raise ScenarioError(f"{origin}: unknown key [{section}] {key}")
            values[f"{section}.{key}"] = val
    return values


def load_scenario(path: Optional[str | Path] = None, preset: Optional[str] = None,
                  overrides: Optional[dict[str, str]] = None) -> Scenario:
    """Build a validated scenario: defaults, then the preset, then the file, then overrides.

    ``overrides`` maps ``section.key`` to value text, e.g. ``{"montecarlo.seed": "7"}``.
    Raises :class:`ScenarioError` on parse or validation failure and ``OSError``
    when the file cannot be read.
    """
    given: dict[str, str] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ScenarioError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        given.update(_read_ini(PRESETS[preset], f"preset {preset}"))
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        given.update(_read_ini(text, str(path)))
    for key, val in (overrides or {}).items():
        if tuple(key.split(".", 1)) not in SCHEMA:
            raise ScenarioError(f"unknown override {key}")
        given[key] = val
    kwargs, raw, defaulted = {}, [], []
    for (section, key), (attr, kind, default) in SCHEMA.items():
        name = f"{section}.{key}"
        text = given.get(name)
        if text is None:
            text = default
            defaulted.append(name)
        try:
            kwargs[attr] = _convert(kind, text)
        except ScenarioError as exc:
            raise ScenarioError(f"[{section}] {key}: {exc}") from None
        raw.append((name, text.strip()))
    s = Scenario(**kwargs, raw=tuple(raw), defaulted=tuple(defaulted))
    s.validate()
    return s
