"""Closed-form two-qubit model of the Ramsey / which-way sequence.

The atom qubit spans {|1>, |2>}, the detector qubit {down, up}. Joint
amplitudes are ordered (1,down), (1,up), (2,down), (2,up), atom index
slowest. This is the exact reference that the physical simulation in
:mod:`cavity_eraser.experiment` is checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._format import fmt, write_json, write_lines
from .model import rabi_cycle_phase

OUTCOMES = ("1,down", "1,up", "2,down", "2,up")

__all__ = [
    "OUTCOMES",
    "CircuitState",
    "JointDistribution",
    "pi2_gate",
    "phase_gate",
    "entangling_cnot",
    "compose_theta",
    "circuit_state",
    "run_circuit",
    "fringe_curve",
    "write_distribution_csv",
    "distribution_summary",
]


@dataclass(frozen=True, eq=False)
class CircuitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 4:
            raise ValueError("a circuit state has exactly four amplitudes")
        if abs(np.vdot(amps, amps).real - 1) > 1e-12:
            raise ValueError("circuit state is not normalised")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probabilities over (atom, detector) in ``OUTCOMES`` order."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(-1)
        if p.size != 4:
            raise ValueError("a joint distribution has four entries")
        if np.any(p < -1e-12):
            raise ValueError("negative probability")
        if abs(p.sum() - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def table(self) -> np.ndarray:
        """2x2 view indexed [atom, detector]."""
        return self.p.reshape(2, 2)

    def atom_marginal(self) -> np.ndarray:
        return self.table.sum(axis=1)

    def detector_marginal(self) -> np.ndarray:
        return self.table.sum(axis=0)

    def conditional_atom(self, detector: int) -> np.ndarray:
        """P(atom | detector) with detector 0 = down, 1 = up."""
        col = self.table[:, detector]
        total = col.sum()
        if total <= 0:
            raise ValueError("conditioning on an impossible detector outcome")
        return col / total

    def total_variation(self, other: "JointDistribution") -> float:
        return 0.5 * float(np.abs(self.p - other.p).sum())


def pi2_gate() -> np.ndarray:
    """Ramsey pulse ``(1/sqrt2) [[1, i], [i, 1]]`` on {|1>, |2>}."""
    return np.array([[1, 1j], [1j, 1]], dtype=complex) / math.sqrt(2)


def phase_gate(theta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * theta)]).astype(complex)


def entangling_cnot() -> np.ndarray:
    """Flip the detector when the atom is in |2>."""
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = [[0, 1], [1, 0]]
    return m


def compose_theta(theta_ramsey: float, phi_light_shift: float, n_cycles: int, probe_interaction_on: bool) -> float:
    """Relative phase of the |2> branch against |1> accumulated between the pulses.

    With the cavity interaction on, N vacuum Rabi cycles add N*pi to the |1>
    branch (hence the subtraction) and the probe light shift adds to |2>.
    """
    if n_cycles < 0:
        raise ValueError("n_cycles must be non-negative")
    if not probe_interaction_on:
        return theta_ramsey
    return theta_ramsey + phi_light_shift - rabi_cycle_phase(n_cycles)


def _on_atom(u: np.ndarray) -> np.ndarray:
    return np.kron(u, np.eye(2))


def circuit_state(theta: float, probe_on: bool) -> CircuitState:
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1.0
    psi = _on_atom(pi2_gate()) @ psi
    if probe_on:
        psi = entangling_cnot() @ psi
    psi = _on_atom(phase_gate(theta)) @ psi
    psi = _on_atom(pi2_gate()) @ psi
    return CircuitState(psi)


def run_circuit(theta: float, probe_on: bool) -> JointDistribution:
    """Outcome probabilities of pi/2 -> [CNOT] -> phase(theta) -> pi/2 from |1, down>."""
    amps = circuit_state(theta, probe_on).amplitudes
    return JointDistribution(np.abs(amps) ** 2)


def fringe_curve(theta_grid: Sequence[float]) -> np.ndarray:
    """Rows ``(P1, P2)`` of the undisturbed Ramsey fringe, from the gate sequence."""
    theta = np.asarray(theta_grid, dtype=float)
    if theta.size == 0:
        raise ValueError("empty phase grid")
    return np.array([run_circuit(t, probe_on=False).atom_marginal() for t in theta])


def write_distribution_csv(path, thetas: Sequence[float], distributions: Sequence[JointDistribution]):
    lines = ["theta_rad,p1d,p1u,p2d,p2u"]
    for theta, dist in zip(thetas, distributions):
        lines.append(",".join([fmt(theta)] + [fmt(x) for x in dist.p]))
    return write_lines(path, lines)


def distribution_summary(theta: float) -> dict:
    """Both configurations at one phase, keyed for JSON export."""
    out = {"theta_rad": float(theta)}
    for name, probe_on in (("probe_on", True), ("probe_off", False)):
        dist = run_circuit(theta, probe_on)
        out[name] = {
            "joint": dict(zip(OUTCOMES, map(float, dist.p))),
            "atom_marginal": {"1": float(dist.atom_marginal()[0]), "2": float(dist.atom_marginal()[1])},
        }
    return out


def write_distribution_json(path, theta: float):
    return write_json(path, distribution_summary(theta))
