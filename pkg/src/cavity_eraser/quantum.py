"""Dense state vectors, density operators and fixed-step RK4 time evolution.

Conventions: hbar = 1, frequencies in rad/s, Kronecker ordering with the
leftmost subsystem as the slowest-varying index. Density matrices are
vectorised row-major, so ``vec(A @ rho @ B) = kron(A, B.T) @ vec(rho)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

__all__ = [
    "QuantumState",
    "DensityOperator",
    "OperatorMatrix",
    "Hamiltonian",
    "ModulatedHamiltonian",
    "basis_state",
    "destroy",
    "identity",
    "tensor_product",
    "evolve_closed",
    "evolve_lindblad",
    "lindblad_superoperator",
    "expectation",
    "partial_trace",
    "fidelity",
]

HERMITIAN_TOL = 1e-10


def _frozen(array, dtype=complex) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def _dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid subsystem dimensions {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state on a tensor-product space."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", _dims(self.dims))
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.size != math.prod(self.dims):
            raise ValueError(
                f"{amps.size} amplitudes do not match dims {self.dims}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "QuantumState":
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalise the zero vector")
        return QuantumState(self.dims, self.amplitudes / n)

    def to_density(self) -> "DensityOperator":
        psi = self.amplitudes
        return DensityOperator(self.dims, np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Mixed state. Trace and positivity are not enforced here; tests check them."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", _dims(self.dims))
        m = _frozen(self.matrix)
        side = math.prod(self.dims)
        if m.shape != (side, side):
            raise ValueError(f"matrix shape {m.shape} does not match dims {self.dims}")
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Square operator on a tensor-product space (Hamiltonians, gates, jumps)."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", _dims(self.dims))
        m = _frozen(self.matrix)
        side = math.prod(self.dims)
        if m.shape != (side, side):
            raise ValueError(f"matrix shape {m.shape} does not match dims {self.dims}")
        object.__setattr__(self, "matrix", m)

    @property
    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.dims, self.matrix.conj().T)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_dims(self.dims, other.dims)
        return OperatorMatrix(self.dims, self.matrix + other.matrix)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_dims(self.dims, other.dims)
        return OperatorMatrix(self.dims, self.matrix - other.matrix)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_dims(self.dims, other.dims)
        return OperatorMatrix(self.dims, self.matrix @ other.matrix)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.dims, self.matrix * scalar)

    __rmul__ = __mul__

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.matrix))))
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol * scale)

    def apply(self, state: QuantumState) -> QuantumState:
        _check_dims(self.dims, state.dims)
        return QuantumState(state.dims, self.matrix @ state.amplitudes)


@dataclass(frozen=True, eq=False)
class ModulatedHamiltonian:
    """``H(t) = base + profile(t) * modulated`` with a real scalar profile.

    Callable like any schedule; the integrators recognise it and precompute
    the two generator pieces instead of rebuilding them every stage.
    """

    base: OperatorMatrix
    modulated: OperatorMatrix
    profile: Callable[[float], float]

    def __post_init__(self):
        _check_dims(self.base.dims, self.modulated.dims)
        for op in (self.base, self.modulated):
            if not op.is_hermitian():
                raise ValueError("ModulatedHamiltonian pieces must be Hermitian")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.base.dims

    def __call__(self, t: float) -> OperatorMatrix:
        return self.base + self.modulated * float(self.profile(t))


Hamiltonian = Union[OperatorMatrix, ModulatedHamiltonian, Callable[[float], OperatorMatrix]]
CollapseList = Sequence[tuple[OperatorMatrix, float]]


def _check_dims(a: tuple[int, ...], b: tuple[int, ...]) -> None:
    if tuple(a) != tuple(b):
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def basis_state(dims: Sequence[int], index: Union[int, Sequence[int]]) -> QuantumState:
    """Computational basis ket, addressed by flat index or per-subsystem labels."""
    dims = _dims(dims)
    if not isinstance(index, (int, np.integer)):
        index = int(np.ravel_multi_index(tuple(index), dims))
    amps = np.zeros(math.prod(dims), dtype=complex)
    amps[index] = 1.0
    return QuantumState(dims, amps)


def destroy(n: int) -> OperatorMatrix:
    """Truncated annihilation operator on ``n`` Fock levels."""
    return OperatorMatrix((n,), np.diag(np.sqrt(np.arange(1, n)), k=1))


def identity(dims: Sequence[int]) -> OperatorMatrix:
    dims = _dims(dims)
    return OperatorMatrix(dims, np.eye(math.prod(dims)))


def tensor_product(a, b):
    """Kronecker product of two states, density operators or operators of the same kind."""
    if type(a) is not type(b):
        raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")
    dims = a.dims + b.dims
    if isinstance(a, QuantumState):
        return QuantumState(dims, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, (OperatorMatrix, DensityOperator)):
        return type(a)(dims, np.kron(a.matrix, b.matrix))
    raise TypeError(f"unsupported operand {type(a).__name__}")


# ---------------------------------------------------------------------------
# integrators


def _steps(t: float, dt: float) -> tuple[int, float]:
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return 0, 0.0
    n = max(1, math.ceil(t / dt - 1e-9))
    return n, t / n


def _rk4_propagator(generator: np.ndarray, h: float) -> np.ndarray:
    """One RK4 step for a constant linear generator, as a matrix polynomial."""
    k = generator * h
    eye = np.eye(k.shape[0], dtype=complex)
    k2 = k @ k
    k3 = k2 @ k
    return eye + k + k2 / 2 + k3 / 6 + (k3 @ k) / 24


def _resolve(H: Hamiltonian, dims: tuple[int, ...], t: float) -> np.ndarray:
    op = H(t) if callable(H) else H
    _check_dims(op.dims, dims)
    if not op.is_hermitian():
        raise ValueError(f"Hamiltonian is not Hermitian at t={t:g}")
    return op.matrix


def evolve_closed(
    state: QuantumState,
    H: Hamiltonian,
    t: float,
    dt: float,
    t0: float = 0.0,
) -> QuantumState:
    """Integrate ``i d|psi>/dt = H |psi>`` from ``t0`` to ``t0 + t``.

    ``H`` is either a fixed operator or a callable ``H(time)``. The step is
    shrunk so that an integer number of steps covers ``t`` exactly.
    """
    n, h = _steps(t, dt)
    psi = state.amplitudes.copy()
    if n == 0:
        return QuantumState(state.dims, psi)
    if not callable(H):
        prop = _rk4_propagator(-1j * _resolve(H, state.dims, t0), h)
        for _ in range(n):
            psi = prop @ psi
        return QuantumState(state.dims, psi)

    if isinstance(H, ModulatedHamiltonian):
        _check_dims(H.dims, state.dims)
        g0, g1 = -1j * H.base.matrix, -1j * H.modulated.matrix

        def rhs(time, y):
            return (g0 + float(H.profile(time)) * g1) @ y

    else:

        def rhs(time, y):
            return -1j * (_resolve(H, state.dims, time) @ y)

    time = t0
    for _ in range(n):
        psi = _rk4_step(rhs, time, psi, h)
        time += h
    return QuantumState(state.dims, psi)


def _rk4_step(f, time, y, h):
    k1 = f(time, y)
    k2 = f(time + h / 2, y + h / 2 * k1)
    k3 = f(time + h / 2, y + h / 2 * k2)
    k4 = f(time + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _dissipator(collapse_ops: CollapseList, dims: tuple[int, ...]) -> np.ndarray:
    side = math.prod(dims)
    eye = np.eye(side)
    out = np.zeros((side * side, side * side), dtype=complex)
    for op, rate in collapse_ops:
        if rate < 0:
            raise ValueError(f"negative collapse rate {rate}")
        _check_dims(op.dims, dims)
        if rate == 0:
            continue
        L = op.matrix
        LdL = L.conj().T @ L
        out += rate * (
            np.kron(L, L.conj()) - 0.5 * np.kron(LdL, eye) - 0.5 * np.kron(eye, LdL.T)
        )
    return out


def _hamiltonian_superop(H: np.ndarray) -> np.ndarray:
    eye = np.eye(H.shape[0])
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


def lindblad_superoperator(H: OperatorMatrix, collapse_ops: CollapseList = ()) -> np.ndarray:
    """Row-major Liouvillian matrix acting on ``rho.reshape(-1)``."""
    return _hamiltonian_superop(_resolve(H, H.dims, 0.0)) + _dissipator(collapse_ops, H.dims)


def evolve_lindblad(
    rho: DensityOperator,
    H: Hamiltonian,
    collapse_ops: CollapseList,
    t: float,
    dt: float,
    t0: float = 0.0,
) -> DensityOperator:
    """Integrate ``drho/dt = -i[H, rho] + sum_k rate_k D[L_k] rho`` with RK4.

    Positivity is not clamped; the Liouvillian is traceless and Hermiticity
    preserving, so RK4 keeps both properties up to rounding.
    """
    dims = rho.dims
    n, h = _steps(t, dt)
    vec = rho.matrix.reshape(-1).copy()
    side = rho.matrix.shape[0]
    if n == 0:
        return DensityOperator(dims, vec.reshape(side, side))
    if not callable(H):
        gen = _hamiltonian_superop(_resolve(H, dims, t0)) + _dissipator(collapse_ops, dims)
        prop = _rk4_propagator(gen, h)
        for _ in range(n):
            vec = prop @ vec
        return DensityOperator(dims, vec.reshape(side, side))

    # time-dependent generators act in matrix form: O(d^3) per stage instead of O(d^4)
    for op, rate in collapse_ops:
        if rate < 0:
            raise ValueError(f"negative collapse rate {rate}")
        _check_dims(op.dims, dims)
    jumps = [(math.sqrt(rate) * op.matrix) for op, rate in collapse_ops if rate > 0]
    anti = sum((L.conj().T @ L for L in jumps), np.zeros((side, side), dtype=complex))
    if isinstance(H, ModulatedHamiltonian):
        _check_dims(H.dims, dims)
        h0, h1 = H.base.matrix, H.modulated.matrix

        def hamiltonian(time):
            return h0 + float(H.profile(time)) * h1

    else:

        def hamiltonian(time):
            return _resolve(H, dims, time)

    def rhs(time, y):
        r = y.reshape(side, side)
        k = -1j * hamiltonian(time) - 0.5 * anti
        out = k @ r + r @ k.conj().T
        for L in jumps:
            out += L @ r @ L.conj().T
        return out.reshape(-1)

    time = t0
    for _ in range(n):
        vec = _rk4_step(rhs, time, vec, h)
        time += h
    return DensityOperator(dims, vec.reshape(side, side))


# ---------------------------------------------------------------------------
# measurement-side helpers


def expectation(op: OperatorMatrix, state: Union[QuantumState, DensityOperator]) -> complex:
    _check_dims(op.dims, state.dims)
    if isinstance(state, QuantumState):
        psi = state.amplitudes
        return complex(np.vdot(psi, op.matrix @ psi))
    return complex(np.trace(op.matrix @ state.matrix))


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Reduce ``rho`` to the subsystems listed in ``keep`` (order preserved)."""
    n = len(rho.dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"invalid subsystem indices {keep} for {n} subsystems")
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    traced = [k for k in range(n) if k not in keep]
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    # trace highest index first so remaining axis numbers stay valid
    for k in sorted(traced, reverse=True):
        m = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=k, axis2=k + m)
    kept_dims = tuple(rho.dims[k] for k in keep)
    side = math.prod(kept_dims)
    return DensityOperator(kept_dims, tensor.reshape(side, side))


def fidelity(target: QuantumState, state: Union[QuantumState, DensityOperator]) -> float:
    """``|<target|psi>|^2`` or ``<target|rho|target>`` for a pure target."""
    _check_dims(target.dims, state.dims)
    phi = target.amplitudes
    if isinstance(state, QuantumState):
        return float(abs(np.vdot(phi, state.amplitudes)) ** 2)
    return float(np.real(np.vdot(phi, state.matrix @ phi)))
