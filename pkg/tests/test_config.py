import math

import pytest

from cavity_eraser.config import DEFAULTS, OUTPUT_ENV, ConfigError, load_config, parse_override
from cavity_eraser.model import KHZ, PhysicalParams, PulseShape


def write(tmp_path, text):
    path = tmp_path / "cfg.toml"
    path.write_text(text)
    return path


def test_empty_file_gives_defaults(tmp_path):
    cfg = load_config(write(tmp_path, ""))
    assert cfg.physical == PhysicalParams()
    assert cfg.timing.probe_shape is PulseShape.GAUSSIAN
    tl = cfg.timeline()
    assert tl.cavity.cycles == 14
    assert tl.cavity.window_duration == pytest.approx(70e-6)
    assert cfg.sweep.grid().size == 16
    assert cfg.batch.trials_per_point * cfg.sweep.points == 10000


def test_no_file_equals_empty_file(tmp_path):
    assert load_config().physical == load_config(write(tmp_path, "")).physical


def test_khz_converted(tmp_path):
    cfg = load_config(write(tmp_path, "physical.g_khz = 50\nphysical.kappa_khz = 0\n"))
    assert cfg.physical.g == pytest.approx(50 * 2 * math.pi * 1e3)
    assert cfg.physical.kappa == 0.0


def test_sections_and_dotted_keys_agree(tmp_path):
    a = load_config(write(tmp_path, "[physical]\ng_khz = 80\n"))
    b = load_config(overrides={"physical.g_khz": 80})
    assert a.physical == b.physical


def test_negative_coupling_names_field(tmp_path):
    with pytest.raises(ConfigError, match="physical.g_khz"):
        load_config(write(tmp_path, "physical.g_khz = -1\n"))


def test_longer_probe_rescales_window():
    tl = load_config(overrides={"timing.probe_duration": 70e-6}).timeline()
    assert tl.cavity.cycles == 28
    assert tl.cavity.window_duration == pytest.approx(140e-6)


@pytest.mark.parametrize(
    "key,value,match",
    [
        ("batch.trials_per_point", 0, "batch.trials_per_point"),
        ("physical.fock_cutoff", 1, "physical.fock_cutoff"),
        ("timing.probe_shape", "triangle", "timing.probe_shape"),
        ("detector.threshold", 1.5, "detector.threshold"),
        ("output.format", "xml", "output.format"),
        ("sweep.points", 2.5, "sweep.points"),
        ("timing.probe_enabled", "yes", "timing.probe_enabled"),
        ("timing.interaction_time", 72e-6, "timing"),
    ],
)
def test_invalid_values(key, value, match):
    with pytest.raises(ConfigError, match=match):
        load_config(overrides={key: value})


def test_unknown_key(tmp_path):
    with pytest.raises(ConfigError, match="physical.gg"):
        load_config(write(tmp_path, "physical.gg = 1\n"))


def test_malformed_file(tmp_path):
    with pytest.raises(ConfigError, match="malformed"):
        load_config(write(tmp_path, "physical.g_khz = = 3\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.toml")


def test_auto_values():
    cfg = load_config(overrides={"timing.ramp_time": "auto", "timing.off_detuning_khz": 20000})
    assert cfg.timing.ramp_time is None
    assert cfg.timeline().cavity.off_detuning == pytest.approx(20000 * KHZ)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("physical.g_khz=80", ("physical.g_khz", 80)),
        ("timing.probe_shape = square", ("timing.probe_shape", "square")),
        ("sweep.endpoint=true", ("sweep.endpoint", True)),
        ("output.directory=out dir", ("output.directory", "out dir")),
    ],
)
def test_parse_override(text, expected):
    assert parse_override(text) == expected


def test_parse_override_needs_equals():
    with pytest.raises(ConfigError):
        parse_override("physical.g_khz")


def test_output_directory_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "env"))
    assert load_config().output.directory == str(tmp_path / "env")
    assert load_config(overrides={"output.directory": "x"}).output.directory == "x"


def test_every_default_validates():
    load_config(overrides={key: value for key, (_, value) in DEFAULTS.items() if value is not None})
