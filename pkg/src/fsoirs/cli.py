"""Command-line entry point: ``fsoirs <verb> [options]``."""
from __future__ import annotations

import argparse
import sys
import warnings
from typing import Optional, Sequence

from .errors import ResolutionError, ScenarioError, ValidityWarning
from .report import emit
from .scenario import PRESETS, load_scenario
from .sweeps import (run_placement, run_position_sweep, run_size_sweep, run_snr_sweep,
                     run_validation)

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2
DEFAULT_PRESET = {
    "size-sweep": "fig2",
    "snr-sweep": "fig3",
    "position-sweep": "fig4a",
    "placement": "fig4a",
    "validate": "fig2",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fsoirs", description="IRS vs relay FSO link analysis")
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, text in (
        ("size-sweep", "GML versus IRS side length"),
        ("snr-sweep", "outage versus transmit SNR"),
        ("position-sweep", "outage versus node position on the ellipse"),
        ("placement", "closed-form optimal positions against a sweep"),
        ("validate", "wave-oracle GML against the closed forms"),
    ):
        sp = sub.add_parser(verb, help=text)
        sp.add_argument("--scenario", help="INI scenario file")
        sp.add_argument("--preset", choices=sorted(PRESETS),
                        help=f"named parameter set (default {DEFAULT_PRESET[verb]} when no scenario file)")
        sp.add_argument("--out", default="results", help="output directory")
        sp.add_argument("--seed", type=int, help="Monte Carlo root seed")
        sp.add_argument("--trials", type=int, help="Monte Carlo trials per curve")
        sp.add_argument("--oracle", action="store_true", help="add wave-oracle GML columns")
    return p


def _run(args, scenario):
    """Run one verb; returns (results to emit, exit status)."""
    if args.verb == "size-sweep":
        return [run_size_sweep(scenario, oracle=args.oracle)], EXIT_OK
    if args.verb == "snr-sweep":
        return [run_snr_sweep(scenario)], EXIT_OK
    if args.verb == "position-sweep":
        return [run_position_sweep(scenario)], EXIT_OK
    if args.verb == "placement":
        res = run_placement(scenario)
        ok = all(res.columns["within_step"])
        return [res, res.annotations["position_sweep"]], EXIT_OK if ok else EXIT_VALIDATION
    res = run_validation(scenario)
    return [res], EXIT_OK if res.annotations["all_passed"] else EXIT_VALIDATION


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.seed is not None:
        overrides["montecarlo.seed"] = str(args.seed)
    if args.trials is not None:
        overrides["montecarlo.trials"] = str(args.trials)
    preset = args.preset
    if preset is None and args.scenario is None:
        preset = DEFAULT_PRESET[args.verb]
    try:
        scenario = load_scenario(args.scenario, preset, overrides)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_IO

    with warnings.catch_warnings(record=True) as log:
        warnings.simplefilter("always", ValidityWarning)
        try:
            outputs, status = _run(args, scenario)
        except ResolutionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION

    notes = sorted({str(w.message) for w in log if issubclass(w.category, ValidityWarning)})
    for msg in notes:
        print(f"warning: {msg}", file=sys.stderr)
    try:
        for result in outputs:
            result.annotations.setdefault("warnings", notes)
            for path in emit(result, scenario, args.out):
                print(path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if status != EXIT_OK:
        print("validation failed: see the 'passed'/'within_step' columns", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
