"""Write sweep results to disk: CSV table, key-value metadata, gnuplot script and PNG."""
from __future__ import annotations

import csv
import subprocess
from importlib import metadata
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .scenario import Scenario  # noqa: E402
from .sweeps import SweepResult  # noqa: E402


def tool_version() -> str:
    """Package version, extended with ``git describe`` output when run from a checkout."""
    try:
        base = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        base = "0.0.0"
    try:
        desc = subprocess.run(
            ["git", "describe", "--always", "--dirty"], cwd=Path(__file__).parent,
            capture_output=True, text=True, timeout=5, check=True,
        ).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        desc = ""
    return f"{base}+g{desc}" if desc else base


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt(x) for x in v)
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def write_csv(result: SweepResult, path: Path) -> None:
    names = list(result.columns)
    rows = zip(*(result.columns[n] for n in names))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_metadata(result: SweepResult, scenario: Scenario, path: Path, version: str) -> None:
    lines = [
        f"kind = {result.kind}",
        f"version = {version}",
        f"seed = {scenario.seed}",
        f"scenario_digest = {scenario.digest()}",
    ]
    for key, val in result.annotations.items():
        if isinstance(val, SweepResult):
            continue
        lines.append(f"result.{key} = {_fmt(val)}")
    for name, text in scenario.raw:
        flag = " (default)" if name in scenario.defaulted else ""
        lines.append(f"scenario.{name} = {text}{flag}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _series(result: SweepResult) -> list[tuple[str, str]]:
    """(column, style) pairs for the figure; style is 'line', 'points' or 'dash'."""
    cols = list(result.columns)
    if result.kind == "size":
        picks = [("gml", "line"), ("G1", "dash"), ("G2", "dash"), ("G3", "dash")]
        if "oracle" in cols:
            picks.append(("oracle", "points"))
        return picks
    if result.kind == "snr":
        out = []
        for c in cols:
            if c.endswith("_outage"):
                out.append((c, "line"))
            elif c.endswith("_mc"):
                out.append((c, "points"))
            elif c.endswith("_asymptote"):
                out.append((c, "dash"))
        return out
    if result.kind == "position":
        return [(c, "line") for c in cols if c.endswith("_outage")]
    if result.kind == "validate":
        return [("closed_form", "line"), ("oracle", "points")]
    return []


def _axes(result: SweepResult) -> tuple[str, str, bool, bool]:
    return {
        "size": ("IRS side length L [m]", "GML", True, True),
        "snr": ("transmit SNR [dB]", "outage probability", False, True),
        "position": ("node x coordinate [m]", "outage probability", False, True),
        "validate": ("IRS side length L [m]", "GML", True, True),
    }.get(result.kind, ("", "", False, False))


def write_gnuplot(result: SweepResult, csv_name: str, png_name: str, path: Path) -> None:
    xlabel, ylabel, logx, logy = _axes(result)
    names = list(result.columns)
    x = names.index(result.variable) + 1
    styles = {"line": "with lines lw 2", "points": "with points pt 7 ps 0.6", "dash": "with lines dt 2"}
    plots = [
        f"'{csv_name}' using {x}:{names.index(c) + 1} {styles[st]} title '{c.replace('_', ' ')}'"
        for c, st in _series(result)
    ]
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set terminal pngcairo size 900,600",
        f"set output '{png_name.replace('.png', '_gnuplot.png')}'",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set grid",
    ]
    if logx:
        lines.append("set logscale x")
    if logy:
        lines.append("set logscale y")
    if result.kind == "size":
        for key, val in result.annotations.items():
            lines.append(f"set arrow from {val!r}, graph 0 to {val!r}, graph 1 nohead dt 3")
    if plots:
        lines.append("plot " + ", \\\n     ".join(plots))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_png(result: SweepResult, path: Path) -> None:
    xlabel, ylabel, logx, logy = _axes(result)
    fig, ax = plt.subplots(figsize=(7.5, 5))
    x = np.asarray(result.columns[result.variable], dtype=float)
    fmt = {"line": "-", "points": "o", "dash": "--"}
    for col, style in _series(result):
        y = np.asarray(result.columns[col], dtype=float)
        keep = y > 0 if logy else np.isfinite(y)
        ax.plot(x[keep], y[keep], fmt[style], ms=3, label=col.replace("_", " "))
    if result.kind == "size":
        for key, val in result.annotations.items():
            if key.startswith("sqrt_"):
                ax.axvline(val, ls=":", color="grey")
    if result.kind == "position":
        for key, val in result.annotations.items():
            if key.endswith("_closed_form_x"):
                for v in val:
                    ax.axvline(v, ls=":", color="grey", lw=0.8)
    ax.set_xscale("log" if logx else "linear")
    ax.set_yscale("log" if logy else "linear")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def emit(result: SweepResult, scenario: Scenario, out_dir, stem: Optional[str] = None,
         version: Optional[str] = None) -> list[Path]:
    """Write ``<stem>.csv``, ``<stem>.meta``, ``<stem>.gp`` and ``<stem>.png`` into ``out_dir``.

    I/O failures propagate as ``OSError`` with the offending path in the message.
    """
    out = Path(out_dir)
    stem = stem or result.kind
    version = version or tool_version()
    paths = [out / f"{stem}.{ext}" for ext in ("csv", "meta", "gp", "png")]
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_csv(result, paths[0])
        write_metadata(result, scenario, paths[1], version)
        write_gnuplot(result, paths[0].name, paths[3].name, paths[2])
        if _series(result):
            write_png(result, paths[3])
        else:
            paths.pop()
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc}") from exc
    return paths
