"""Command-line entry point: ``cavity-eraser <subcommand> [options]``.

Subcommands write plot-ready data files into the output directory:

    spectrum   coupled-cavity transmission and probe power spectrum
    fringes    undisturbed Ramsey fringe from the circuit model
    circuit    joint atom/detector distributions (probe on and off)
    run        seeded delayed-choice batch
    analyze    fringe visibilities of a batch file
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ._format import write_json
from .circuit import OUTCOMES, distribution_summary, run_circuit, write_distribution_csv
from .config import Config, ConfigError, load_config, parse_override
from .experiment import (
    analysis_summary,
    analyze,
    read_batch,
    run_batch,
    write_batch_csv,
    write_batch_json,
)
from .model import PulseSpec
from .spectroscopy import default_grid, probe_spectrum, transmission_spectrum, write_spectrum_csv

log = logging.getLogger("cavity_eraser")

SUBCOMMANDS = ("spectrum", "fringes", "circuit", "run", "analyze")


def _out_dir(config: Config) -> Path:
    path = Path(config.output.directory)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output.directory: cannot create {path}: {exc}") from exc
    if not path.is_dir():
        raise ConfigError(f"output.directory: {path} is not a directory")
    return path


def _curve_json(path, curve):
    return write_json(
        path,
        {
            "frequency_Hz_over_2pi": [float(w / (2 * math.pi)) for w in curve.frequencies],
            "value": [float(v) for v in curve.values],
        },
    )


def cmd_spectrum(config: Config, args) -> list[Path]:
    params = config.physical
    pulse = PulseSpec(
        shape=config.timing.probe_shape,
        duration=config.timing.probe_duration,
        carrier_detuning=params.probe_detuning,
    )
    grid = default_grid(params, config.spectrum_points)
    coupled = transmission_spectrum(params, grid, atom_coupled=True)
    probe = probe_spectrum(pulse, grid)
    out = _out_dir(config)
    if config.output.format == "json":
        return [_curve_json(out / "spectrum_coupled.json", coupled), _curve_json(out / "spectrum_probe.json", probe)]
    return [write_spectrum_csv(coupled, out / "spectrum_coupled.csv"), write_spectrum_csv(probe, out / "spectrum_probe.csv")]


def cmd_fringes(config: Config, args) -> list[Path]:
    thetas = config.sweep.grid()
    dists = [run_circuit(t, probe_on=False) for t in thetas]
    out = _out_dir(config)
    if config.output.format == "json":
        rows = [dict(zip(("theta_rad",) + OUTCOMES, [float(t), *map(float, d.p)])) for t, d in zip(thetas, dists)]
        return [write_json(out / "fringes.json", {"rows": rows})]
    return [write_distribution_csv(out / "fringes.csv", thetas, dists)]


def cmd_circuit(config: Config, args) -> list[Path]:
    summary = distribution_summary(args.theta)
    thetas = config.sweep.grid()
    spread = max(float(np.max(np.abs(run_circuit(t, True).p - 0.25))) for t in thetas)
    summary["probe_on_max_deviation_from_uniform"] = spread
    return [write_json(_out_dir(config) / "circuit.json", summary)]


def cmd_run(config: Config, args) -> list[Path]:
    params = config.physical
    records = run_batch(
        params,
        config.timeline(),
        config.sweep.grid(),
        config.batch.trials_per_point,
        config.batch.master_seed,
        config.detector,
    )
    out = _out_dir(config)
    log.info("ran %d trials", len(records))
    if config.output.format == "json":
        return [write_batch_json(records, out / "batch.json")]
    return [write_batch_csv(records, out / "batch.csv")]


def cmd_analyze(config: Config, args) -> list[Path]:
    out = _out_dir(config)
    source = Path(args.input) if args.input else out / f"batch.{config.output.format}"
    if not source.exists():
        raise ConfigError(f"batch file {source} does not exist")
    summary = analysis_summary(analyze(read_batch(source)))
    return [write_json(out / "analysis.json", summary)]


COMMANDS = {
    "spectrum": cmd_spectrum,
    "fringes": cmd_fringes,
    "circuit": cmd_circuit,
    "run": cmd_run,
    "analyze": cmd_analyze,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="key = value configuration file")
    common.add_argument(
        "-s", "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override one configuration key (repeatable)",
    )
    common.add_argument("-o", "--out", help="output directory (overrides output.directory)")
    common.add_argument("--format", choices=("csv", "json"), help="tabular output format")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cavity-eraser", description="Delayed-choice atom-in-cavity simulator.")
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True
    sub.add_parser("spectrum", parents=[common], help="transmission and probe spectra")
    p = sub.add_parser("fringes", parents=[common], help="Ramsey fringe curve")
    p.add_argument("--points", type=int, help="number of phase points")
    p = sub.add_parser("circuit", parents=[common], help="joint distribution summary")
    p.add_argument("--theta", type=float, default=0.0, help="Ramsey phase in rad")
    p = sub.add_parser("run", parents=[common], help="delayed-choice batch")
    p.add_argument("--trials", type=int, help="trials per phase point")
    p.add_argument("--points", type=int, help="number of phase points")
    p.add_argument("--seed", type=int, help="master seed")
    p = sub.add_parser("analyze", parents=[common], help="visibility summary of a batch")
    p.add_argument("-i", "--input", help="batch file (default: <out>/batch.csv)")
    return parser


def _overrides(args) -> dict:
    overrides = dict(parse_override(item) for item in args.overrides)
    flags = {
        "output.directory": args.out,
        "output.format": args.format,
        "sweep.points": getattr(args, "points", None),
        "batch.trials_per_point": getattr(args, "trials", None),
        "batch.master_seed": getattr(args, "seed", None),
    }
    overrides.update({k: v for k, v in flags.items() if v is not None})
    return overrides


def dispatch(subcommand: str, config: Config, args=None) -> list[Path]:
    if subcommand not in COMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}; choose from {', '.join(SUBCOMMANDS)}")
    return COMMANDS[subcommand](config, args or argparse.Namespace(theta=0.0, input=None))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = load_config(args.config, _overrides(args))
        written = dispatch(args.command, config, args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"cavity-eraser {args.command}: error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0
