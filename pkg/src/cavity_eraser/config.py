"""Run configuration: flat ``section.key = value`` files (TOML dotted keys).

Frequencies are entered as omega/2pi in kHz and converted to rad/s here;
nothing else in the package handles kHz. Unknown keys are rejected.
"""
from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .experiment import Timeline, TimingConfig, build_timeline
from .model import KHZ, PhysicalParams, PulseShape
from .spectroscopy import DEFAULT_GRID_POINTS, DetectorModel

OUTPUT_ENV = "CAVITY_ERASER_OUTPUT"

__all__ = ["ConfigError", "Config", "SweepConfig", "BatchConfig", "OutputConfig", "DEFAULTS", "load_config", "parse_override"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class SweepConfig:
    theta_min: float = 0.0
    theta_max: float = 2 * math.pi
    points: int = 16
    endpoint: bool = False

    def grid(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.points, endpoint=self.endpoint)


@dataclass(frozen=True)
class BatchConfig:
    trials_per_point: int = 625
    master_seed: int = 20240601


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "output"
    format: str = "csv"


@dataclass(frozen=True)
class Config:
    physical: PhysicalParams = field(default_factory=PhysicalParams)
    timing: TimingConfig = field(default_factory=TimingConfig)
    detector: DetectorModel = field(default_factory=DetectorModel)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    batch: BatchConfig = field(default_factory=BatchConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    spectrum_points: int = DEFAULT_GRID_POINTS

    def timeline(self) -> Timeline:
        return build_timeline(self.physical, self.timing)


# key -> (kind, default); kinds drive parsing and validation
DEFAULTS: dict[str, tuple[str, Any]] = {
    "physical.g_khz": ("positive", 100.0),
    "physical.kappa_khz": ("nonneg", 5.0),
    "physical.gamma_khz": ("nonneg", 2.0),
    "physical.delta12_khz": ("positive", 51.1e6),
    "physical.probe_detuning_khz": ("float", 0.0),
    "physical.probe_photons": ("nonneg", 1.0),
    "physical.fock_cutoff": ("int>=2", 4),
    "timing.probe_duration": ("positive", 35e-6),
    "timing.interaction_time": ("auto|positive", "auto"),
    "timing.ramp_time": ("auto|nonneg", "auto"),
    "timing.off_detuning_khz": ("auto|positive", "auto"),
    "timing.probe_shape": ("shape", "gaussian"),
    "timing.probe_enabled": ("bool", True),
    "timing.flight_gap": ("positive", 10e-6),
    "detector.threshold": ("unit", 0.5),
    "detector.shot_noise": ("bool", False),
    "detector.mean_photons": ("positive", 20.0),
    "sweep.theta_min": ("float", 0.0),
    "sweep.theta_max": ("float", 2 * math.pi),
    "sweep.points": ("int>=1", 16),
    "sweep.endpoint": ("bool", False),
    "batch.trials_per_point": ("int>=1", 625),
    "batch.master_seed": ("int>=0", 20240601),
    "output.directory": ("str", None),
    "output.format": ("format", "csv"),
    "spectrum.points": ("int>=3", DEFAULT_GRID_POINTS),
}


def _flatten(table: Mapping, prefix: str = "") -> dict[str, Any]:
    out = {}
    for key, value in table.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            out.update(_flatten(value, name + "."))
        else:
            out[name] = value
    return out


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite")
    return float(value)


def _validate(key: str, value):
    kind, _ = DEFAULTS[key]
    if kind.startswith("auto|"):
        if value == "auto":
            return None
        kind = kind[5:]
    if kind == "float":
        return _number(key, value)
    if kind == "positive":
        v = _number(key, value)
        if v <= 0:
            raise ConfigError(f"{key}: must be positive, got {value!r}")
        return v
    if kind == "nonneg":
        v = _number(key, value)
        if v < 0:
            raise ConfigError(f"{key}: must be non-negative, got {value!r}")
        return v
    if kind == "unit":
        v = _number(key, value)
        if not 0 < v < 1:
            raise ConfigError(f"{key}: must lie in (0, 1), got {value!r}")
        return v
    if kind.startswith("int>="):
        lo = int(kind[5:])
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        if value < lo:
            raise ConfigError(f"{key}: must be >= {lo}, got {value!r}")
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected true or false, got {value!r}")
        return value
    if kind == "shape":
        try:
            return PulseShape(value)
        except ValueError:
            raise ConfigError(f"{key}: expected 'square' or 'gaussian', got {value!r}") from None
    if kind == "format":
        if value not in ("csv", "json"):
            raise ConfigError(f"{key}: expected 'csv' or 'json', got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str) or not value:
            raise ConfigError(f"{key}: expected a non-empty string")
        return value
    raise AssertionError(kind)  # pragma: no cover


def parse_override(text: str) -> tuple[str, Any]:
    """``key=value`` with a TOML literal value; bare words are taken as strings."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = (part.strip() for part in text.split("=", 1))
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw
    return key, value


def load_config(path: Optional[os.PathLike] = None, overrides: Optional[Mapping[str, Any]] = None) -> Config:
    """Resolve a config file plus overrides into a validated :class:`Config`."""
    raw: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            raw.update(_flatten(tomllib.loads(text)))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
    raw.update(overrides or {})
    unknown = sorted(set(raw) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")

    v = {key: _validate(key, raw[key]) if key in raw else _default(key) for key in DEFAULTS}

    try:
        physical = PhysicalParams(
            g=v["physical.g_khz"] * KHZ,
            kappa=v["physical.kappa_khz"] * KHZ,
            gamma=v["physical.gamma_khz"] * KHZ,
            delta12=v["physical.delta12_khz"] * KHZ,
            probe_detuning=v["physical.probe_detuning_khz"] * KHZ,
            probe_photons=v["physical.probe_photons"],
            fock_cutoff=v["physical.fock_cutoff"],
        )
    except ValueError as exc:
        raise ConfigError(f"physical: {exc}") from exc
    off = v["timing.off_detuning_khz"]
    timing = TimingConfig(
        probe_duration=v["timing.probe_duration"],
        interaction_time=v["timing.interaction_time"],
        ramp_time=v["timing.ramp_time"],
        off_detuning=None if off is None else off * KHZ,
        probe_shape=v["timing.probe_shape"],
        probe_enabled=v["timing.probe_enabled"],
        flight_gap=v["timing.flight_gap"],
    )
    try:
        build_timeline(physical, timing)
    except ValueError as exc:
        raise ConfigError(f"timing: {exc}") from exc
    directory = v["output.directory"] or os.environ.get(OUTPUT_ENV) or OutputConfig.directory
    return Config(
        physical=physical,
        timing=timing,
        detector=DetectorModel(
            threshold=v["detector.threshold"],
            shot_noise=v["detector.shot_noise"],
            mean_photons=v["detector.mean_photons"],
        ),
        sweep=SweepConfig(v["sweep.theta_min"], v["sweep.theta_max"], v["sweep.points"], v["sweep.endpoint"]),
        batch=BatchConfig(v["batch.trials_per_point"], v["batch.master_seed"]),
        output=OutputConfig(directory, v["output.format"]),
        spectrum_points=v["spectrum.points"],
    )


def _default(key):
    kind, value = DEFAULTS[key]
    return None if value is None else _validate(key, value)
