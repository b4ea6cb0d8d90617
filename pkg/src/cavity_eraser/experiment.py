"""Physical simulation of single delayed-choice runs and seeded batches.

A trial starts from |1> x |vac>, applies the first Ramsey pulse, optionally
sends the atom through the Stark-switched cavity window while the probe
fires, applies the second pulse and samples the final atomic level.

The cavity window acts on the atom before the Ramsey phase is applied, and
that phase is diagonal in the atomic levels, so it commutes with the window
channel. The channel output is therefore computed once per
(params, timeline, detector) and cached; individual trials only apply the
phase, the second pulse and the sampling.
"""
from __future__ import annotations

import csv
import functools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ._format import fmt, write_json, write_lines
from .circuit import JointDistribution, compose_theta, pi2_gate, run_circuit
from .model import (
    ATOM_DIM,
    GHOST,
    LEVEL_1,
    LEVEL_2,
    LEVEL_3,
    PhysicalParams,
    PulseShape,
    PulseSpec,
    StarkSchedule,
    collapse_operators,
    default_dt,
    interaction_cycles,
    jc_hamiltonian,
    light_shift_phase,
    stark_detuning,
    vacuum_rabi_period,
)
from .quantum import DensityOperator, ModulatedHamiltonian, QuantumState, evolve_lindblad, partial_trace
from .spectroscopy import DetectorModel, down_probability, resonant_extinction

__all__ = [
    "Pi2Pulse",
    "CavityWindow",
    "ProbeWindow",
    "Measure",
    "Timeline",
    "TimingConfig",
    "RunRecord",
    "FringeFitResult",
    "PartitionSummary",
    "Analysis",
    "TrialSpec",
    "build_timeline",
    "cavity_transit",
    "probe_effective_duration",
    "branch_transmissions",
    "outcome_probabilities",
    "oracle_distribution",
    "run_trial",
    "trial_seed",
    "trial_plan",
    "run_batch",
    "fit_fringe",
    "analyze",
    "write_batch_csv",
    "read_batch_csv",
    "write_batch_json",
    "read_batch",
    "analysis_summary",
    "write_analysis_json",
]

# largest |H| * dt allowed inside Stark ramps, where the detuning dwarfs g
_MAX_PHASE_STEP = 0.05


# ---------------------------------------------------------------------------
# timeline


@dataclass(frozen=True)
class Pi2Pulse:
    time: float
    phase: float = 0.0


@dataclass(frozen=True)
class CavityWindow:
    schedule: StarkSchedule

    @property
    def time(self) -> float:
        return self.schedule.window_start


@dataclass(frozen=True)
class ProbeWindow:
    pulse: PulseSpec

    @property
    def time(self) -> float:
        return self.pulse.start


@dataclass(frozen=True)
class Measure:
    time: float


Event = Union[Pi2Pulse, CavityWindow, ProbeWindow, Measure]


@dataclass(frozen=True)
class Timeline:
    events: tuple

    def __post_init__(self):
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        times = [e.time for e in events]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("timeline event times must be strictly increasing")
        pulses = [e for e in events if isinstance(e, Pi2Pulse)]
        if len(pulses) != 2:
            raise ValueError("a timeline needs exactly two pi/2 pulses")
        if not events or not isinstance(events[-1], Measure):
            raise ValueError("Measure must be the last event")
        if sum(isinstance(e, Measure) for e in events) != 1:
            raise ValueError("exactly one Measure event is allowed")
        cavities = [e for e in events if isinstance(e, CavityWindow)]
        probes = [e for e in events if isinstance(e, ProbeWindow)]
        if len(cavities) > 1 or len(probes) > 1:
            raise ValueError("at most one cavity window and one probe window")
        first, second = pulses
        if cavities:
            s = cavities[0].schedule
            if not (first.time < s.window_start and s.end < second.time):
                raise ValueError("cavity window must lie between the two pi/2 pulses")
        if probes:
            if not cavities:
                raise ValueError("a probe window needs a cavity window")
            s = cavities[0].schedule
            p = probes[0].pulse
            tol = 1e-9 * s.window_duration
            if p.start < s.plateau_start - tol or p.end > s.plateau_end + tol:
                raise ValueError("probe window must lie inside the resonant cavity window")

    @property
    def pulses(self) -> tuple[Pi2Pulse, Pi2Pulse]:
        first, second = [e for e in self.events if isinstance(e, Pi2Pulse)]
        return first, second

    @property
    def cavity(self) -> Optional[StarkSchedule]:
        for e in self.events:
            if isinstance(e, CavityWindow):
                return e.schedule
        return None

    @property
    def probe(self) -> Optional[PulseSpec]:
        for e in self.events:
            if isinstance(e, ProbeWindow):
                return e.pulse
        return None

    @property
    def measure_time(self) -> float:
        return self.events[-1].time


@dataclass(frozen=True)
class TimingConfig:
    """Durations for :func:`build_timeline`; ``None`` means derive automatically.

    ``interaction_time`` defaults to twice the probe duration rounded to a
    whole number of vacuum Rabi periods; ``ramp_time`` defaults to a tenth of
    a period and ``off_detuning`` to 100 g.
    """

    probe_duration: float = 35e-6
    interaction_time: Optional[float] = None
    ramp_time: Optional[float] = None
    off_detuning: Optional[float] = None
    probe_shape: PulseShape = PulseShape.GAUSSIAN
    probe_enabled: bool = True
    flight_gap: float = 10e-6


def build_timeline(params: PhysicalParams, timing: TimingConfig = TimingConfig()) -> Timeline:
    if not timing.probe_duration > 0:
        raise ValueError("probe_duration must be positive")
    if timing.flight_gap <= 0:
        raise ValueError("flight_gap must be positive")
    period = vacuum_rabi_period(params.g)
    if timing.interaction_time is None:
        cycles = interaction_cycles(2 * timing.probe_duration, params.g)
        interaction = cycles * period
    else:
        interaction = timing.interaction_time
        if not interaction > 0:
            raise ValueError("interaction_time must be positive")
        cycles = interaction / period
        if abs(cycles - round(cycles)) > 1e-6 or round(cycles) < 1:
            raise ValueError(
                f"interaction_time is {cycles:.9g} vacuum Rabi periods; it must be an integer multiple"
            )
    if timing.probe_enabled and timing.probe_duration > interaction * (1 + 1e-12):
        raise ValueError(
            f"probe_duration {timing.probe_duration:g} s exceeds interaction time {interaction:g} s"
        )
    ramp = period / 10 if timing.ramp_time is None else timing.ramp_time
    off = 100 * params.g if timing.off_detuning is None else timing.off_detuning

    gap = timing.flight_gap
    schedule = StarkSchedule(
        window_start=gap,
        window_duration=interaction,
        off_detuning=off,
        ramp_time=ramp,
        coupling=params.g,
    )
    events: list[Event] = [Pi2Pulse(0.0), CavityWindow(schedule)]
    if timing.probe_enabled:
        pulse = PulseSpec(
            shape=timing.probe_shape,
            duration=timing.probe_duration,
            center_time=schedule.center,
            carrier_detuning=params.probe_detuning,
        )
        events.append(ProbeWindow(pulse))
    events.append(Pi2Pulse(schedule.end + gap))
    events.append(Measure(schedule.end + 2 * gap))
    return Timeline(tuple(events))


# ---------------------------------------------------------------------------
# cavity window dynamics


def _stark_hamiltonian(params: PhysicalParams, schedule: StarkSchedule):
    base = jc_hamiltonian(params, 0.0)
    shift = jc_hamiltonian(params, 1.0) - base
    return base, ModulatedHamiltonian(base, shift, functools.partial(stark_detuning, schedule))


def _evolve_segment(rho, params, schedule, t_a, t_b, dt):
    if t_b <= t_a:
        return rho
    base, H = _stark_hamiltonian(params, schedule)
    collapse = collapse_operators(params)
    on_plateau = schedule.plateau_start <= t_a and t_b <= schedule.plateau_end
    if on_plateau:
        return evolve_lindblad(rho, base, collapse, t_b - t_a, dt, t0=t_a)
    h = min(dt, _MAX_PHASE_STEP / (schedule.off_detuning + 2 * params.g * math.sqrt(params.fock_cutoff)))
    return evolve_lindblad(rho, H, collapse, t_b - t_a, h, t0=t_a)


def _segments(schedule: StarkSchedule, cuts: Iterable[float] = ()):
    points = {schedule.window_start, schedule.plateau_start, schedule.plateau_end, schedule.end}
    points.update(c for c in cuts if schedule.window_start < c < schedule.end)
    points = sorted(points)
    return list(zip(points, points[1:]))


def _stark_phase(schedule: StarkSchedule) -> float:
    """Integral of the Stark detuning over the window (both ramps)."""
    return schedule.off_detuning * schedule.ramp_time


def _calibrate(rho: DensityOperator, params: PhysicalParams, phases: dict) -> DensityOperator:
    diag = np.ones(ATOM_DIM, dtype=complex)
    for level, phase in phases.items():
        diag[level] *= np.exp(1j * phase)
    u = np.kron(diag, np.ones(params.fock_cutoff))
    return DensityOperator(rho.dims, (u[:, None] * rho.matrix) * u.conj()[None, :])


def cavity_transit(
    params: PhysicalParams,
    schedule: StarkSchedule,
    rho: DensityOperator,
    dt: Optional[float] = None,
) -> DensityOperator:
    """Evolve through the full Stark schedule with dissipation, no detector.

    The bare Stark energy of |1> integrated over the ramps is a fixed,
    calibrated phase and is removed from the output.
    """
    dt = default_dt(params.g) if dt is None else dt
    for t_a, t_b in _segments(schedule):
        rho = _evolve_segment(rho, params, schedule, t_a, t_b, dt)
    return _calibrate(rho, params, {LEVEL_1: _stark_phase(schedule)})


def probe_effective_duration(pulse: PulseSpec) -> float:
    """Intensity-weighted probe duration ``int |E/E0|^2 dt``."""
    if pulse.shape is PulseShape.SQUARE:
        return pulse.duration
    return pulse.duration * math.sqrt(math.pi / (8 * math.log(2)))


@functools.lru_cache(maxsize=64)
def _transmissions(params: PhysicalParams, pulse: PulseSpec) -> tuple[float, ...]:
    resonant = resonant_extinction(params, pulse)
    detuned = resonant_extinction(params, pulse, atom_detuning=params.delta12)
    out = [1.0] * ATOM_DIM
    out[LEVEL_1] = resonant
    out[LEVEL_3] = resonant
    out[LEVEL_2] = detuned
    out[GHOST] = 1.0
    return tuple(out)


def branch_transmissions(params: PhysicalParams, pulse: PulseSpec) -> dict[int, float]:
    """Mean probe transmission for the atom parked in each level."""
    return dict(enumerate(_transmissions(params, pulse)))


def _first_pulse_state(params: PhysicalParams, phase: float) -> DensityOperator:
    r = np.eye(ATOM_DIM, dtype=complex)
    d = np.diag([1.0, np.exp(1j * phase)])
    r[:2, :2] = d @ pi2_gate() @ d.conj()
    atom = r[:, LEVEL_1]
    vac = np.zeros(params.fock_cutoff)
    vac[0] = 1.0
    return QuantumState(params.dims, np.kron(atom, vac)).to_density()


@functools.lru_cache(maxsize=64)
def _window_blocks(params: PhysicalParams, timeline: Timeline, detector: DetectorModel, choice_bit: int):
    """Unnormalised atomic {|1>,|2>} blocks after the cavity, keyed by detector label."""
    first, _ = timeline.pulses
    rho = _first_pulse_state(params, first.phase)
    if choice_bit == 0:
        atom = partial_trace(rho, [0]).matrix
        return {"none": atom[:2, :2].copy()}

    schedule = timeline.cavity
    pulse = timeline.probe
    if schedule is None or pulse is None:
        raise ValueError("choice_bit = 1 needs a cavity window and a probe window")
    dt = default_dt(params.g)
    t_probe = pulse.center_time

    before = [seg for seg in _segments(schedule, [t_probe]) if seg[1] <= t_probe]
    after = [seg for seg in _segments(schedule, [t_probe]) if seg[0] >= t_probe]
    for t_a, t_b in before:
        rho = _evolve_segment(rho, params, schedule, t_a, t_b, dt)

    p_down = np.array([down_probability(detector, T) for T in _transmissions(params, pulse)])
    phi = light_shift_phase(params.g, params.probe_photons, probe_effective_duration(pulse), params.delta12)
    blocks = {}
    for label, weights in (("down", p_down), ("up", 1 - p_down)):
        k = np.kron(np.sqrt(weights), np.ones(params.fock_cutoff))
        branch = DensityOperator(rho.dims, (k[:, None] * rho.matrix) * k[None, :])
        for t_a, t_b in after:
            branch = _evolve_segment(branch, params, schedule, t_a, t_b, dt)
        branch = _calibrate(branch, params, {LEVEL_1: _stark_phase(schedule), LEVEL_2: phi})
        atom = partial_trace(branch, [0]).matrix
        blocks[label] = atom[:2, :2].copy()
    return blocks


def outcome_probabilities(
    params: PhysicalParams,
    timeline: Timeline,
    choice_bit: int,
    theta_ramsey: float,
    detector: DetectorModel = DetectorModel(),
) -> tuple[JointDistribution, float]:
    """Joint (atom, detector) distribution of detected atoms, and the detected fraction.

    Atoms ending in |3> or the ghost level are not counted by the final
    state-selective detection, so the distribution is conditioned on the atom
    being found in |1> or |2>. For ``choice_bit = 0`` the detector column is
    ``down`` throughout, matching the untouched detector of the circuit model.
    """
    if choice_bit not in (0, 1):
        raise ValueError(f"choice_bit must be 0 or 1, got {choice_bit}")
    _, second = timeline.pulses
    d = np.diag([1.0, np.exp(1j * second.phase)])
    u = d @ pi2_gate() @ d.conj() @ np.diag([1.0, np.exp(1j * theta_ramsey)])
    table = np.zeros((2, 2))
    for label, block in _window_blocks(params, timeline, detector, choice_bit).items():
        col = 1 if label == "up" else 0
        table[:, col] = np.real(np.diag(u @ block @ u.conj().T))
    table = np.clip(table, 0.0, None)
    detected = float(table.sum())
    if detected <= 0:
        raise ValueError("no atom survives to the final detection")
    return JointDistribution(table.reshape(-1) / detected), detected


def oracle_distribution(params: PhysicalParams, timeline: Timeline, choice_bit: int, theta_ramsey: float):
    """Closed-form circuit prediction with the phases this timeline imprints."""
    first, second = timeline.pulses
    theta = theta_ramsey + first.phase - second.phase
    if choice_bit == 0:
        return run_circuit(compose_theta(theta, 0.0, 0, False), False)
    schedule, pulse = timeline.cavity, timeline.probe
    phi = light_shift_phase(params.g, params.probe_photons, probe_effective_duration(pulse), params.delta12)
    return run_circuit(compose_theta(theta, phi, schedule.cycles, True), True)


# ---------------------------------------------------------------------------
# trials and batches


@dataclass(frozen=True)
class RunRecord:
    trial_id: int
    choice_bit: int
    ramsey_phase: float
    detector: str
    atom_outcome: int
    seed: int

    def __post_init__(self):
        if self.choice_bit not in (0, 1):
            raise ValueError("choice_bit must be 0 or 1")
        if (self.detector == "none") != (self.choice_bit == 0):
            raise ValueError("detector is 'none' exactly when choice_bit = 0")
        if self.detector not in ("none", "down", "up"):
            raise ValueError(f"unknown detector state {self.detector!r}")
        if self.atom_outcome not in (1, 2):
            raise ValueError("atom_outcome must be 1 or 2")


_OUTCOME_LABELS = ((1, "down"), (1, "up"), (2, "down"), (2, "up"))


def run_trial(
    params: PhysicalParams,
    timeline: Timeline,
    choice_bit: int,
    theta_ramsey: float,
    seed: int,
    trial_id: int = 0,
    detector: DetectorModel = DetectorModel(),
) -> RunRecord:
    joint, _ = outcome_probabilities(params, timeline, choice_bit, theta_ramsey, detector)
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(joint.p)
    idx = int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"), 3))
    atom, det = _OUTCOME_LABELS[idx]
    return RunRecord(
        trial_id=trial_id,
        choice_bit=choice_bit,
        ramsey_phase=float(theta_ramsey),
        detector=det if choice_bit == 1 else "none",
        atom_outcome=atom,
        seed=int(seed),
    )


def trial_seed(master_seed: int, trial_id: int, stream: int = 0) -> int:
    """64-bit seed for one trial, mixed from (master_seed, trial_id, stream)."""
    words = np.random.SeedSequence([int(master_seed), int(trial_id), int(stream)]).generate_state(2, np.uint32)
    return int(words[0]) << 32 | int(words[1])


@dataclass(frozen=True)
class TrialSpec:
    trial_id: int
    theta: float
    choice_bit: int
    seed: int


def trial_plan(theta_grid: Sequence[float], trials_per_point: int, master_seed: int) -> list[TrialSpec]:
    if trials_per_point < 1:
        raise ValueError("trials_per_point must be >= 1")
    plan = []
    for i, theta in enumerate(theta_grid):
        for k in range(trials_per_point):
            tid = i * trials_per_point + k
            choice = int(np.random.default_rng(trial_seed(master_seed, tid, 1)).integers(2))
            plan.append(TrialSpec(tid, float(theta), choice, trial_seed(master_seed, tid, 0)))
    return plan


def run_batch(
    params: PhysicalParams,
    timeline: Timeline,
    theta_grid: Sequence[float],
    trials_per_point: int,
    master_seed: int,
    detector: DetectorModel = DetectorModel(),
) -> list[RunRecord]:
    """Seeded delayed-choice batch; each trial owns its RNG streams."""
    return [
        run_trial(params, timeline, spec.choice_bit, spec.theta, spec.seed, spec.trial_id, detector)
        for spec in trial_plan(theta_grid, trials_per_point, master_seed)
    ]


# ---------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class FringeFitResult:
    visibility: float
    phase_offset: float
    rms_residual: float
    mean: float = 0.0


def _design(theta):
    return np.column_stack([np.ones_like(theta), np.cos(theta), np.sin(theta)])


def fit_fringe(theta_values, probabilities) -> FringeFitResult:
    """Least-squares ``A + B cos(theta) + C sin(theta)``.

    visibility = sqrt(B^2 + C^2) / A, phase offset = atan2(-C, B), so the
    fringe reads ``A (1 + V cos(theta + offset))``.
    """
    theta = np.asarray(theta_values, dtype=float)
    p = np.asarray(probabilities, dtype=float)
    if theta.shape != p.shape or theta.ndim != 1:
        raise ValueError("theta_values and probabilities must be matching 1-D arrays")
    X = _design(theta)
    if np.unique(np.round(np.mod(theta, 2 * math.pi), 12)).size < 3 or np.linalg.matrix_rank(X) < 3:
        raise ValueError("fringe fit needs at least three distinct phases")
    coef, *_ = np.linalg.lstsq(X, p, rcond=None)
    A, B, C = coef
    if A <= 0:
        raise ValueError("fitted fringe mean is not positive")
    resid = p - X @ coef
    return FringeFitResult(
        visibility=float(math.hypot(B, C) / A),
        phase_offset=float(math.atan2(-C, B)),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        mean=float(A),
    )


def _visibility_stderr(theta, n, coef) -> float:
    X = _design(theta)
    p_fit = np.clip(X @ coef, 0.0, 1.0)
    var = p_fit * (1 - p_fit) / n
    xtx_inv = np.linalg.inv(X.T @ X)
    cov = xtx_inv @ (X.T * var) @ X @ xtx_inv
    A, B, C = coef
    R = math.hypot(B, C)
    if R == 0:
        return float(math.sqrt((cov[1, 1] + cov[2, 2]) / 2) / A)
    grad = np.array([-R / A**2, B / (A * R), C / (A * R)])
    return float(math.sqrt(max(grad @ cov @ grad, 0.0)))


@dataclass(frozen=True)
class PartitionSummary:
    name: str
    count: int
    thetas: tuple
    trials: tuple
    p2: tuple
    fit: Optional[FringeFitResult]
    visibility_stderr: Optional[float]


@dataclass(frozen=True)
class Analysis:
    partitions: dict = field(default_factory=dict)

    def __getitem__(self, name) -> PartitionSummary:
        return self.partitions[name]


MIN_PHASES = 8


def _summarize(name: str, records: Sequence[RunRecord], required: bool) -> PartitionSummary:
    if not records:
        if required:
            raise ValueError(f"partition {name!r} is empty")
        return PartitionSummary(name, 0, (), (), (), None, None)
    by_theta: dict[float, list[int]] = {}
    for r in records:
        by_theta.setdefault(r.ramsey_phase, []).append(r.atom_outcome)
    thetas = np.array(sorted(by_theta))
    n = np.array([len(by_theta[t]) for t in thetas], dtype=float)
    p2 = np.array([sum(o == 2 for o in by_theta[t]) for t in thetas]) / n
    if required and thetas.size < MIN_PHASES:
        raise ValueError(f"partition {name!r} spans {thetas.size} phases; need >= {MIN_PHASES}")
    fit = stderr = None
    if thetas.size >= 3:
        fit = fit_fringe(thetas, p2)
        coef, *_ = np.linalg.lstsq(_design(thetas), p2, rcond=None)
        stderr = _visibility_stderr(thetas, n, coef)
    return PartitionSummary(
        name=name,
        count=len(records),
        thetas=tuple(float(t) for t in thetas),
        trials=tuple(int(k) for k in n),
        p2=tuple(float(x) for x in p2),
        fit=fit,
        visibility_stderr=stderr,
    )


def analyze(records: Sequence[RunRecord]) -> Analysis:
    """Fringe fits of P(atom=2 | theta) per choice bit and, for choice 1, per detector reading."""
    records = sorted(records, key=lambda r: r.trial_id)
    parts = {
        "choice0": _summarize("choice0", [r for r in records if r.choice_bit == 0], True),
        "choice1": _summarize("choice1", [r for r in records if r.choice_bit == 1], True),
    }
    for det in ("down", "up"):
        name = f"choice1_{det}"
        parts[name] = _summarize(name, [r for r in records if r.choice_bit == 1 and r.detector == det], False)
    return Analysis(parts)


def analysis_summary(analysis: Analysis) -> dict:
    out = {}
    for name, part in analysis.partitions.items():
        entry = {"count": part.count, "phases": len(part.thetas)}
        if part.fit is not None:
            entry.update(
                visibility=part.fit.visibility,
                visibility_stderr=part.visibility_stderr,
                phase_offset=part.fit.phase_offset,
                mean=part.fit.mean,
                rms_residual=part.fit.rms_residual,
            )
        out[name] = entry
    return out


def write_analysis_json(path, analysis: Analysis):
    return write_json(path, analysis_summary(analysis))


# ---------------------------------------------------------------------------
# batch files

BATCH_COLUMNS = ("trial_id", "choice_bit", "theta_rad", "detector", "atom_outcome", "seed")


def write_batch_csv(records: Sequence[RunRecord], path) -> Path:
    lines = [",".join(BATCH_COLUMNS)]
    for r in records:
        lines.append(f"{r.trial_id},{r.choice_bit},{fmt(r.ramsey_phase)},{r.detector},{r.atom_outcome},{r.seed}")
    return write_lines(path, lines)


def write_batch_json(records: Sequence[RunRecord], path) -> Path:
    rows = [
        dict(zip(BATCH_COLUMNS, (r.trial_id, r.choice_bit, r.ramsey_phase, r.detector, r.atom_outcome, r.seed)))
        for r in records
    ]
    return write_json(path, {"records": rows})


def _record(row: dict) -> RunRecord:
    return RunRecord(
        trial_id=int(row["trial_id"]),
        choice_bit=int(row["choice_bit"]),
        ramsey_phase=float(row["theta_rad"]),
        detector=str(row["detector"]),
        atom_outcome=int(row["atom_outcome"]),
        seed=int(row["seed"]),
    )


def read_batch_csv(path) -> list[RunRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != BATCH_COLUMNS:
            raise ValueError(f"{path}: expected columns {','.join(BATCH_COLUMNS)}")
        return [_record(row) for row in reader]


def read_batch(path) -> list[RunRecord]:
    path = Path(path)
    if path.suffix == ".json":
        with open(path, encoding="utf-8") as fh:
            return [_record(row) for row in json.load(fh)["records"]]
    return read_batch_csv(path)
