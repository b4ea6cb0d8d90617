"""Three-level atom coupled to one cavity mode.

Atomic levels are indexed LEVEL_1, LEVEL_2, LEVEL_3 plus an absorbing GHOST
level that collects population lost from |3> by spontaneous decay. The
composite space is atom (4 levels) x cavity (``fock_cutoff`` Fock levels).
Dynamics are written in the frame rotating at the |1> <-> |3> transition,
which coincides with the cavity frequency.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .quantum import OperatorMatrix, QuantumState, basis_state, destroy, tensor_product

LEVEL_1, LEVEL_2, LEVEL_3, GHOST = range(4)
ATOM_DIM = 4

TWO_PI = 2 * math.pi
KHZ = TWO_PI * 1e3  # rad/s per kHz of omega/2pi

__all__ = [
    "LEVEL_1",
    "LEVEL_2",
    "LEVEL_3",
    "GHOST",
    "ATOM_DIM",
    "KHZ",
    "PhysicalParams",
    "PulseShape",
    "PulseSpec",
    "StarkSchedule",
    "atom_projector",
    "atom_operator",
    "cavity_operator",
    "model_state",
    "jc_hamiltonian",
    "vacuum_rabi_period",
    "interaction_cycles",
    "rabi_cycle_phase",
    "light_shift_phase",
    "pulse_envelope",
    "collapse_operators",
    "stark_detuning",
    "default_dt",
]


@dataclass(frozen=True)
class PhysicalParams:
    """All rates and frequencies of the atom-cavity system, in rad/s.

    ``delta12`` defaults to the 51.1 GHz splitting of the n=50/n=51 circular
    Rydberg pair; ``fock_cutoff`` is the number of Fock levels kept.
    """

    g: float = 100 * KHZ
    kappa: float = 5 * KHZ
    gamma: float = 2 * KHZ
    delta12: float = 51.1e6 * KHZ
    probe_detuning: float = 0.0
    probe_photons: float = 1.0
    fock_cutoff: int = 4

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if self.probe_photons < 0:
            raise ValueError(f"probe_photons must be non-negative, got {self.probe_photons}")
        if int(self.fock_cutoff) != self.fock_cutoff or self.fock_cutoff < 2:
            raise ValueError(f"fock_cutoff must be an integer >= 2, got {self.fock_cutoff}")
        if self.delta12 == 0:
            raise ValueError("delta12 must be non-zero")

    @property
    def dims(self) -> tuple[int, int]:
        return (ATOM_DIM, int(self.fock_cutoff))

    def is_strong_coupling(self) -> bool:
        return self.g > self.kappa and self.g > self.gamma

    def check_strong_coupling(self) -> bool:
        """Warn (not raise) when g does not dominate both loss rates."""
        ok = self.is_strong_coupling()
        if not ok:
            warnings.warn(
                f"weak coupling: g={self.g:.4g} kappa={self.kappa:.4g} gamma={self.gamma:.4g}",
                RuntimeWarning,
                stacklevel=2,
            )
        return ok

    def ideal(self) -> "PhysicalParams":
        """Same system with both loss channels switched off."""
        return PhysicalParams(
            g=self.g,
            kappa=0.0,
            gamma=0.0,
            delta12=self.delta12,
            probe_detuning=self.probe_detuning,
            probe_photons=self.probe_photons,
            fock_cutoff=self.fock_cutoff,
        )


class PulseShape(str, enum.Enum):
    SQUARE = "square"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class PulseSpec:
    """Probe envelope. For gaussian pulses ``duration`` is the field FWHM."""

    shape: PulseShape = PulseShape.SQUARE
    duration: float = 35e-6
    center_time: float = 0.0
    peak_amplitude: float = 1.0
    carrier_detuning: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "shape", PulseShape(self.shape))
        if not self.duration > 0:
            raise ValueError(f"pulse duration must be positive, got {self.duration}")

    @property
    def start(self) -> float:
        return self.center_time - self.duration / 2

    @property
    def end(self) -> float:
        return self.center_time + self.duration / 2


@dataclass(frozen=True)
class StarkSchedule:
    """Stark-switched interaction window.

    The atom is held at ``off_detuning`` except for a resonant plateau of
    length ``window_duration`` (= N vacuum Rabi periods). Linear ramps of
    ``ramp_time`` sit on either side of the plateau: the detuning falls from
    ``window_start`` to ``window_start + ramp_time`` and rises again after
    the plateau, so the whole schedule ends at ``end``.
    """

    window_start: float
    window_duration: float
    off_detuning: float
    ramp_time: float
    coupling: float

    def __post_init__(self):
        if not self.coupling > 0:
            raise ValueError("coupling must be positive")
        if self.ramp_time < 0:
            raise ValueError("ramp_time must be non-negative")
        if self.off_detuning <= 0:
            raise ValueError("off_detuning must be positive")
        cycles = self.window_duration / vacuum_rabi_period(self.coupling)
        if round(cycles) < 1 or abs(cycles - round(cycles)) > 1e-6:
            raise ValueError(
                f"window_duration is {cycles:.9g} vacuum Rabi periods, expected an integer >= 1"
            )
        if self.off_detuning < 100 * self.coupling:
            warnings.warn(
                f"off_detuning is only {self.off_detuning / self.coupling:.3g} g",
                RuntimeWarning,
                stacklevel=2,
            )

    @classmethod
    def for_cycles(cls, g, cycles, window_start=0.0, off_detuning=None, ramp_time=None):
        period = vacuum_rabi_period(g)
        return cls(
            window_start=window_start,
            window_duration=cycles * period,
            off_detuning=100 * g if off_detuning is None else off_detuning,
            ramp_time=period / 10 if ramp_time is None else ramp_time,
            coupling=g,
        )

    @property
    def cycles(self) -> int:
        return int(round(self.window_duration / vacuum_rabi_period(self.coupling)))

    @property
    def plateau_start(self) -> float:
        return self.window_start + self.ramp_time

    @property
    def plateau_end(self) -> float:
        return self.plateau_start + self.window_duration

    @property
    def end(self) -> float:
        return self.plateau_end + self.ramp_time

    @property
    def center(self) -> float:
        return 0.5 * (self.plateau_start + self.plateau_end)


# ---------------------------------------------------------------------------
# operators


def atom_projector(i: int, j: int | None = None) -> np.ndarray:
    """|i><j| on the atomic space."""
    m = np.zeros((ATOM_DIM, ATOM_DIM), dtype=complex)
    m[i, i if j is None else j] = 1.0
    return m


def atom_operator(params: PhysicalParams, local: np.ndarray) -> OperatorMatrix:
    """Embed an atomic operator into atom x cavity."""
    return tensor_product(
        OperatorMatrix((ATOM_DIM,), local), OperatorMatrix((params.fock_cutoff,), np.eye(params.fock_cutoff))
    )


def cavity_operator(params: PhysicalParams, local: np.ndarray) -> OperatorMatrix:
    return tensor_product(
        OperatorMatrix((ATOM_DIM,), np.eye(ATOM_DIM)), OperatorMatrix((params.fock_cutoff,), local)
    )


def model_state(params: PhysicalParams, level: int, photons: int = 0) -> QuantumState:
    return basis_state(params.dims, (level, photons))


def jc_hamiltonian(params: PhysicalParams, atom_cavity_detuning: float = 0.0) -> OperatorMatrix:
    """``Delta |1><1| + g (a |1><3| + a^dag |3><1|)``; |2> and the ghost are uncoupled."""
    a = destroy(params.fock_cutoff).matrix
    up = np.kron(atom_projector(LEVEL_1, LEVEL_3), a)
    H = atom_cavity_detuning * np.kron(atom_projector(LEVEL_1), np.eye(params.fock_cutoff))
    H = H + params.g * (up + up.conj().T)
    return OperatorMatrix(params.dims, H)


def collapse_operators(params: PhysicalParams) -> list[tuple[OperatorMatrix, float]]:
    """Cavity leakage at kappa and |3> -> ghost decay at gamma; zero rates are dropped."""
    ops = []
    if params.kappa > 0:
        ops.append((cavity_operator(params, destroy(params.fock_cutoff).matrix), params.kappa))
    if params.gamma > 0:
        ops.append((atom_operator(params, atom_projector(GHOST, LEVEL_3)), params.gamma))
    return ops


# ---------------------------------------------------------------------------
# timing and phases


def vacuum_rabi_period(g: float) -> float:
    """Duration pi/g of one full |1,0> -> |3,1> -> |1,0> cycle."""
    if not g > 0:
        raise ValueError(f"g must be positive, got {g}")
    return math.pi / g


def interaction_cycles(interaction_time: float, g: float) -> int:
    """Nearest whole number (>= 1) of vacuum Rabi cycles fitting ``interaction_time``."""
    return max(1, int(round(interaction_time / vacuum_rabi_period(g))))


def default_dt(g: float) -> float:
    return vacuum_rabi_period(g) / 200


def rabi_cycle_phase(cycles: int) -> float:
    if cycles < 0:
        raise ValueError("cycles must be non-negative")
    return cycles * math.pi


def light_shift_phase(omega_rabi: float, n: float, t: float, delta: float) -> float:
    """Dispersive phase ``omega_rabi**2 * n * t / delta`` of the off-resonant level."""
    if delta == 0:
        raise ValueError("delta must be non-zero")
    if n < 0 or t < 0:
        raise ValueError("n and t must be non-negative")
    return omega_rabi**2 * n * t / delta


def pulse_envelope(spec: PulseSpec, t):
    """Field envelope in rad/s at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    if spec.shape is PulseShape.SQUARE:
        inside = np.abs(t - spec.center_time) <= spec.duration / 2
        out = np.where(inside, spec.peak_amplitude, 0.0)
    else:
        out = spec.peak_amplitude * np.exp(-4 * math.log(2) * (t - spec.center_time) ** 2 / spec.duration**2)
    return float(out) if out.ndim == 0 else out


def stark_detuning(schedule: StarkSchedule, t: float) -> float:
    off = schedule.off_detuning
    r = schedule.ramp_time
    if t <= schedule.window_start or t >= schedule.end:
        return off
    if schedule.plateau_start <= t <= schedule.plateau_end:
        return 0.0
    if t < schedule.plateau_start:
        return off * (schedule.plateau_start - t) / r
    return off * (t - schedule.plateau_end) / r
