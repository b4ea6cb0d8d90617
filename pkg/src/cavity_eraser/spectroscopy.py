"""Cavity transmission spectra, probe spectra and the binary photodetector.

Frequencies are angular offsets (rad/s) from the |1> <-> |3> transition,
which is also the empty-cavity resonance.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from ._format import fmt, write_lines
from .model import PhysicalParams, PulseShape, PulseSpec, pulse_envelope

DEFAULT_GRID_POINTS = 2**12

__all__ = [
    "SpectrumCurve",
    "DetectorLabel",
    "DetectorOutcome",
    "DetectorModel",
    "default_grid",
    "transmission",
    "transmission_spectrum",
    "pulse_fourier_transform",
    "probe_spectrum",
    "resonant_extinction",
    "classify_detector",
    "down_probability",
    "local_maxima",
    "peak_fwhm",
    "main_lobe_fwhm",
    "write_spectrum_csv",
]


@dataclass(frozen=True, eq=False)
class SpectrumCurve:
    frequencies: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        f = np.array(self.frequencies, dtype=float)
        v = np.array(self.values, dtype=float)
        if f.ndim != 1 or f.shape != v.shape:
            raise ValueError("frequencies and values must be 1-D arrays of equal length")
        if f.size > 1 and np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        f.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.frequencies.size


class DetectorLabel(str, enum.Enum):
    DOWN = "down"
    UP = "up"


@dataclass(frozen=True)
class DetectorOutcome:
    label: DetectorLabel
    mean_transmission: float


@dataclass(frozen=True)
class DetectorModel:
    """High/low classification of the transmitted probe.

    With ``shot_noise`` the detector counts Poisson photons with mean
    ``mean_photons * transmission`` and reports ``down`` when the count is
    below ``threshold * mean_photons``.
    """

    threshold: float = 0.5
    shot_noise: bool = False
    mean_photons: float = 20.0

    def __post_init__(self):
        if not 0 < self.threshold < 1:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.shot_noise and not self.mean_photons > 0:
            raise ValueError("mean_photons must be positive in shot-noise mode")


def default_grid(params: PhysicalParams, points: int = DEFAULT_GRID_POINTS, pulse: Optional[PulseSpec] = None):
    """Symmetric grid over +-4g, widened to cover the cavity line and probe lobe if needed."""
    half = 4 * params.g
    half = max(half, 20 * params.kappa, 20 * params.gamma)
    if pulse is not None:
        half = max(half, 40 * math.pi / pulse.duration + abs(pulse.carrier_detuning))
    return np.linspace(-half, half, points)


def transmission(params: PhysicalParams, omega, atom_coupled: bool = True, atom_detuning: float = 0.0):
    """Steady-state single-atom transmission normalised to the empty-cavity peak."""
    omega = np.asarray(omega, dtype=float)
    half_k = params.kappa / 2
    if half_k <= 0:
        raise ValueError("transmission needs kappa > 0")
    amp = half_k + 1j * (0.0 - omega)
    if atom_coupled:
        amp = amp + params.g**2 / (1j * (atom_detuning - omega) + params.gamma / 2)
    return np.abs(half_k / amp) ** 2


def transmission_spectrum(
    params: PhysicalParams,
    omega_grid: Sequence[float],
    atom_coupled: bool = True,
    atom_detuning: float = 0.0,
) -> SpectrumCurve:
    grid = np.asarray(omega_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty frequency grid")
    return SpectrumCurve(grid, transmission(params, grid, atom_coupled, atom_detuning))


def pulse_fourier_transform(pulse: PulseSpec, omega, samples: Optional[int] = None) -> np.ndarray:
    """``F(w) = int E(t) exp(i (w - w_c) t) dt`` by trapezoidal quadrature of the envelope.

    The envelope is sampled densely enough to resolve the largest requested
    offset; the carrier only shifts the spectrum.
    """
    omega = np.asarray(omega, dtype=float)
    rel = omega - pulse.carrier_detuning
    if pulse.shape is PulseShape.SQUARE:
        lo, hi = pulse.start, pulse.end
    else:
        # beyond 4 FWHM the field is below 1e-19 of its peak
        lo, hi = pulse.center_time - 4 * pulse.duration, pulse.center_time + 4 * pulse.duration
    span = hi - lo
    if samples is None:
        # the boxcar edges limit trapezoid accuracy to O((w h)^2); the smooth
        # gaussian integrand converges spectrally once w h is below pi
        max_phase_step = 0.05 if pulse.shape is PulseShape.SQUARE else 0.5
        wmax = float(np.max(np.abs(rel))) if rel.size else 0.0
        samples = int(max(801, min(200_001, math.ceil(span * wmax / max_phase_step) + 1)))
    t = np.linspace(lo, hi, samples)
    w = np.full(samples, span / (samples - 1))
    w[0] = w[-1] = w[0] / 2
    env = pulse_envelope(pulse, t) * w
    out = np.empty(rel.shape, dtype=complex)
    flat_rel = rel.reshape(-1)
    flat_out = out.reshape(-1)
    # chunk to bound memory of the (frequency x time) phase matrix
    chunk = max(1, 4_000_000 // samples)
    for s in range(0, flat_rel.size, chunk):
        phase = np.exp(1j * np.outer(flat_rel[s : s + chunk], t - pulse.center_time))
        flat_out[s : s + chunk] = phase @ env
    return out


def probe_spectrum(pulse: PulseSpec, omega_grid: Sequence[float]) -> SpectrumCurve:
    """Power spectrum of the probe envelope, normalised to 1 at the carrier."""
    grid = np.asarray(omega_grid, dtype=float)
    power = np.abs(pulse_fourier_transform(pulse, grid)) ** 2
    peak = abs(complex(pulse_fourier_transform(pulse, np.array([pulse.carrier_detuning]))[0])) ** 2
    if peak == 0:
        raise ValueError("degenerate probe spectrum")
    return SpectrumCurve(grid, power / peak)


def resonant_extinction(
    params: PhysicalParams,
    pulse: PulseSpec,
    omega_grid: Optional[Sequence[float]] = None,
    atom_detuning: float = 0.0,
) -> float:
    """Probe energy transmitted with the atom present, relative to the empty cavity.

    For ``kappa = 0`` the ratio is replaced by its kappa -> 0 limit: zero when
    the atom is lossy, otherwise the photon weight of each dressed state times
    the probe spectrum at its frequency.
    """
    if params.kappa == 0:
        return _lossless_extinction(params, pulse, atom_detuning)
    grid = default_grid(params, pulse=pulse) if omega_grid is None else np.asarray(omega_grid, dtype=float)
    S = probe_spectrum(pulse, grid).values
    empty = np.trapezoid(transmission(params, grid, atom_coupled=False) * S, grid)
    if empty <= 0:
        raise ValueError("degenerate (zero) probe spectrum on this grid")
    coupled = np.trapezoid(transmission(params, grid, True, atom_detuning) * S, grid)
    return float(coupled / empty)


def _lossless_extinction(params: PhysicalParams, pulse: PulseSpec, atom_detuning: float) -> float:
    if params.gamma > 0:
        return 0.0
    g, d = params.g, atom_detuning
    root = math.sqrt(d * d + 4 * g * g)
    poles = np.array([(d + root) / 2, (d - root) / 2])
    photon_weight = 1 / (1 + g**2 / (d - poles) ** 2)
    power = np.abs(pulse_fourier_transform(pulse, np.append(poles, pulse.carrier_detuning))) ** 2
    S = power[:2] / power[2]
    return float(np.sum(photon_weight * S))


def classify_detector(mean_transmission: float, threshold: float = 0.5) -> DetectorOutcome:
    """``down`` strictly below threshold; a tie reads ``up``."""
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    label = DetectorLabel.DOWN if mean_transmission < threshold else DetectorLabel.UP
    return DetectorOutcome(label, float(mean_transmission))


def down_probability(model: DetectorModel, mean_transmission: float) -> float:
    """Probability that the detector reads ``down`` for a given mean transmission."""
    if not model.shot_noise:
        return 1.0 if classify_detector(mean_transmission, model.threshold).label is DetectorLabel.DOWN else 0.0
    mu = model.mean_photons * max(mean_transmission, 0.0)
    # counts k with k < threshold * mean_photons
    kmax = math.ceil(model.threshold * model.mean_photons) - 1
    if kmax < 0:
        return 0.0
    return float(stats.poisson.cdf(kmax, mu))


# ---------------------------------------------------------------------------
# curve analysis


def local_maxima(curve: SpectrumCurve) -> np.ndarray:
    """Frequencies of strict interior local maxima."""
    v = curve.values
    idx = np.nonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1
    return curve.frequencies[idx]


def _half_max_crossing(f, v, i, level, step):
    j = i
    while 0 <= j + step < v.size and v[j + step] >= level:
        j += step
    k = j + step
    if not 0 <= k < v.size:
        raise ValueError("peak not resolved inside the grid")
    # linear interpolation between j (above) and k (below)
    return f[j] + (level - v[j]) * (f[k] - f[j]) / (v[k] - v[j])


def peak_fwhm(curve: SpectrumCurve, near: float) -> float:
    """Full width at half maximum of the local peak closest to ``near``."""
    f, v = curve.frequencies, curve.values
    i0 = int(np.argmin(np.abs(f - near)))
    i = i0
    while True:
        if i + 1 < v.size and v[i + 1] > v[i]:
            i += 1
        elif i > 0 and v[i - 1] > v[i]:
            i -= 1
        else:
            break
    level = v[i] / 2
    return float(_half_max_crossing(f, v, i, level, +1) - _half_max_crossing(f, v, i, level, -1))


def main_lobe_fwhm(curve: SpectrumCurve) -> float:
    return peak_fwhm(curve, float(curve.frequencies[int(np.argmax(curve.values))]))


def write_spectrum_csv(curve: SpectrumCurve, path) -> Path:
    path = Path(path)
    lines = ["frequency_Hz_over_2pi,value"]
    for w, v in zip(curve.frequencies, curve.values):
        lines.append(f"{fmt(w / (2 * math.pi))},{fmt(v)}")
    write_lines(path, lines)
    return path
