import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_eraser.quantum import (
    DensityOperator,
    OperatorMatrix,
    QuantumState,
    basis_state,
    destroy,
    evolve_closed,
    evolve_lindblad,
    expectation,
    fidelity,
    identity,
    lindblad_superoperator,
    partial_trace,
    tensor_product,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
SM = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|, level 1 is excited


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


def random_state(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return QuantumState((n,), v / np.linalg.norm(v))


def random_density(rng, dims):
    n = math.prod(dims)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return DensityOperator(tuple(dims), rho / np.trace(rho))


class TestConstruction:
    def test_state_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            QuantumState((2, 2), np.ones(3))

    def test_density_rejects_non_square(self):
        with pytest.raises(ValueError):
            DensityOperator((2,), np.ones((2, 3)))

    def test_operator_dims_must_match_matrix(self):
        with pytest.raises(ValueError):
            OperatorMatrix((3,), np.eye(2))

    def test_arrays_are_read_only(self):
        psi = basis_state((2,), 0)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 2.0

    def test_basis_state_by_labels(self):
        psi = basis_state((3, 4), (2, 1))
        assert np.argmax(np.abs(psi.amplitudes)) == 2 * 4 + 1

    def test_destroy_matrix(self):
        a = destroy(4).matrix
        np.testing.assert_allclose(np.diag(a, 1), np.sqrt([1, 2, 3]))
        np.testing.assert_allclose(np.diag(a.conj().T @ a), [0, 1, 2, 3])


class TestTensorProduct:
    def test_identities(self):
        out = tensor_product(identity((2,)), identity((3,)))
        assert out.dims == (2, 3)
        np.testing.assert_array_equal(out.matrix, np.eye(6))

    def test_basis_bookkeeping(self):
        out = tensor_product(basis_state((2,), 0), basis_state((2,), 1))
        np.testing.assert_array_equal(out.amplitudes, basis_state((4,), 1).amplitudes)

    def test_single_factor_action(self):
        op = tensor_product(OperatorMatrix((2,), SX), identity((2,)))
        out = op.apply(basis_state((2, 2), (0, 0)))
        np.testing.assert_allclose(out.amplitudes, basis_state((2, 2), (1, 0)).amplitudes)

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            tensor_product(identity((2,)), basis_state((2,), 0))


class TestClosedEvolution:
    def test_zero_hamiltonian_is_identity(self):
        rng = np.random.default_rng(1)
        psi = random_state(rng, 3)
        out = evolve_closed(psi, OperatorMatrix((3,), np.zeros((3, 3))), 1.7, 0.01)
        np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-15)

    def test_rabi_pi_pulse(self):
        omega = 2 * math.pi * 1e5
        H = OperatorMatrix((2,), omega / 2 * SX)
        out = evolve_closed(basis_state((2,), 0), H, math.pi / omega, 1e-8)
        np.testing.assert_allclose(out.amplitudes, [0, -1j], atol=1e-9)

    def test_rabi_intermediate_time(self):
        omega = 3.0
        t = 0.4
        out = evolve_closed(basis_state((2,), 0), OperatorMatrix((2,), omega / 2 * SX), t, 1e-3)
        expected = [math.cos(omega * t / 2), -1j * math.sin(omega * t / 2)]
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-10)

    def test_zero_time_returns_input(self):
        psi = basis_state((2,), 1)
        out = evolve_closed(psi, OperatorMatrix((2,), SX), 0.0, 0.1)
        np.testing.assert_array_equal(out.amplitudes, psi.amplitudes)

    def test_callable_matches_constant(self):
        H = OperatorMatrix((2,), 0.7 * SX + 0.2 * SZ)
        psi = basis_state((2,), 0)
        a = evolve_closed(psi, H, 2.0, 1e-3)
        b = evolve_closed(psi, lambda t: H, 2.0, 1e-3)
        np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)

    def test_time_dependent_against_exact_phase(self):
        # commuting H(t) = f(t) sz integrates to exp(-i F(t) sz)
        psi = QuantumState((2,), np.array([1, 1]) / math.sqrt(2))
        out = evolve_closed(psi, lambda t: OperatorMatrix((2,), math.cos(t) * SZ), 1.3, 1e-3)
        F = math.sin(1.3)
        np.testing.assert_allclose(out.amplitudes, np.array([np.exp(-1j * F), np.exp(1j * F)]) / math.sqrt(2), atol=1e-10)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            evolve_closed(basis_state((2,), 0), OperatorMatrix((2,), SM), 1.0, 0.1)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            evolve_closed(basis_state((3,), 0), OperatorMatrix((2,), SX), 1.0, 0.1)

    @pytest.mark.parametrize("dt", [0.0, -1e-3])
    def test_bad_step_rejected(self, dt):
        with pytest.raises(ValueError):
            evolve_closed(basis_state((2,), 0), OperatorMatrix((2,), SX), 1.0, dt)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6), t=st.floats(0.0, 5.0))
    def test_norm_preserved(self, seed, n, t):
        rng = np.random.default_rng(seed)
        H = OperatorMatrix((n,), random_hermitian(rng, n))
        # same resolution as the default model step, ||H|| dt = pi / 200
        dt = math.pi / 200 / np.linalg.norm(H.matrix, 2)
        out = evolve_closed(random_state(rng, n), H, t, dt)
        assert abs(out.norm - 1) <= 1e-9

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), t1=st.floats(0.0, 2.0), t2=st.floats(0.0, 2.0))
    def test_semigroup(self, seed, t1, t2):
        rng = np.random.default_rng(seed)
        H = OperatorMatrix((3,), random_hermitian(rng, 3))
        psi = random_state(rng, 3)
        split = evolve_closed(evolve_closed(psi, H, t1, 1e-3), H, t2, 1e-3)
        whole = evolve_closed(psi, H, t1 + t2, 1e-3)
        assert fidelity(whole, split) >= 1 - 1e-9


class TestLindblad:
    def test_empty_collapse_matches_closed(self):
        rng = np.random.default_rng(3)
        H = OperatorMatrix((4,), random_hermitian(rng, 4))
        psi = random_state(rng, 4)
        rho = evolve_lindblad(psi.to_density(), H, [], 3.0, 1e-3)
        pure = evolve_closed(psi, H, 3.0, 1e-3).to_density()
        np.testing.assert_allclose(rho.matrix, pure.matrix, atol=1e-8)

    def test_spontaneous_decay(self):
        gamma = 2.0
        rho0 = basis_state((2,), 1).to_density()
        L = [(OperatorMatrix((2,), SM), gamma)]
        H = OperatorMatrix((2,), np.zeros((2, 2)))
        for t in (0.1, 0.5, 1.0, 2.5):
            rho = evolve_lindblad(rho0, H, L, t, 1e-3)
            assert abs(rho.matrix[1, 1].real - math.exp(-gamma * t)) <= 1e-6

    def test_photon_decay(self):
        kappa = 1.5
        a = destroy(5)
        n_op = a.dag @ a
        rho0 = basis_state((5,), 2).to_density()
        H = OperatorMatrix((5,), np.zeros((5, 5)))
        for t in (0.2, 1.0, 3.0):
            rho = evolve_lindblad(rho0, H, [(a, kappa)], t, 1e-3)
            assert abs(expectation(n_op, rho).real - 2 * math.exp(-kappa * t)) <= 1e-6

    def test_time_dependent_path_matches_constant(self):
        rng = np.random.default_rng(5)
        H = OperatorMatrix((3,), random_hermitian(rng, 3))
        L = [(OperatorMatrix((3,), rng.normal(size=(3, 3))), 0.3)]
        rho0 = random_density(rng, (3,))
        a = evolve_lindblad(rho0, H, L, 1.0, 1e-3)
        b = evolve_lindblad(rho0, lambda t: H, L, 1.0, 1e-3)
        np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-12)

    def test_negative_rate_rejected(self):
        H = OperatorMatrix((2,), SX)
        with pytest.raises(ValueError):
            evolve_lindblad(basis_state((2,), 0).to_density(), H, [(OperatorMatrix((2,), SM), -1.0)], 1.0, 0.1)

    def test_superoperator_is_trace_preserving(self):
        rng = np.random.default_rng(7)
        H = OperatorMatrix((3,), random_hermitian(rng, 3))
        L = [(OperatorMatrix((3,), rng.normal(size=(3, 3)) + 0j), 0.5)]
        sup = lindblad_superoperator(H, L)
        trace_row = np.eye(3).reshape(-1)
        np.testing.assert_allclose(trace_row @ sup, 0, atol=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), rate=st.floats(0.0, 3.0))
    def test_trace_and_hermiticity_preserved(self, seed, rate):
        rng = np.random.default_rng(seed)
        H = OperatorMatrix((3,), random_hermitian(rng, 3))
        L = [(OperatorMatrix((3,), rng.normal(size=(3, 3)) + 0j), rate)]
        rho = evolve_lindblad(random_density(rng, (3,)), H, L, 1.0, 1e-3)
        assert abs(rho.trace - 1) <= 1e-10
        assert rho.hermiticity_residual() <= 1e-12
        assert rho.min_eigenvalue() >= -1e-10


class TestExpectationAndTrace:
    def test_sigma_z_ground(self):
        assert expectation(OperatorMatrix((2,), SZ), basis_state((2,), 0)) == pytest.approx(1.0)

    def test_sigma_z_plus(self):
        plus = QuantumState((2,), np.array([1, 1]) / math.sqrt(2))
        assert abs(expectation(OperatorMatrix((2,), SZ), plus)) <= 1e-15

    def test_identity_trace(self):
        rho = random_density(np.random.default_rng(2), (3, 2))
        assert expectation(identity((3, 2)), rho) == pytest.approx(1.0, abs=1e-12)

    def test_bell_reduced_state(self):
        bell = QuantumState((2, 2), np.array([1, 0, 0, 1]) / math.sqrt(2))
        np.testing.assert_allclose(partial_trace(bell.to_density(), [0]).matrix, np.eye(2) / 2, atol=1e-15)

    @pytest.mark.parametrize("keep", [[0], [1]])
    def test_product_state_factorises(self, keep):
        rng = np.random.default_rng(11)
        a, b = random_density(rng, (3,)), random_density(rng, (4,))
        joint = tensor_product(a, b)
        np.testing.assert_allclose(partial_trace(joint, keep).matrix, (a, b)[keep[0]].matrix, atol=1e-12)

    def test_three_subsystems(self):
        rng = np.random.default_rng(12)
        a, b, c = (random_density(rng, (d,)) for d in (2, 3, 2))
        joint = tensor_product(tensor_product(a, b), c)
        expected = tensor_product(a, c).matrix
        np.testing.assert_allclose(partial_trace(joint, [0, 2]).matrix, expected, atol=1e-12)

    def test_invalid_keep(self):
        with pytest.raises(ValueError):
            partial_trace(basis_state((2, 2), 0).to_density(), [2])

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), da=st.integers(1, 4), db=st.integers(1, 4))
    def test_partial_trace_inverts_tensor_product(self, seed, da, db):
        rng = np.random.default_rng(seed)
        a, b = random_density(rng, (da,)), random_density(rng, (db,))
        joint = tensor_product(a, b)
        np.testing.assert_allclose(partial_trace(joint, [0]).matrix, a.matrix, atol=1e-12)
        np.testing.assert_allclose(partial_trace(joint, [1]).matrix, b.matrix, atol=1e-12)


def test_fidelity_pure_and_mixed_agree():
    rng = np.random.default_rng(4)
    target, psi = random_state(rng, 3), random_state(rng, 3)
    assert fidelity(target, psi) == pytest.approx(fidelity(target, psi.to_density()), abs=1e-14)


def test_operator_algebra():
    A = OperatorMatrix((2,), SX)
    B = OperatorMatrix((2,), SZ)
    np.testing.assert_allclose((A @ B - B @ A).matrix, -2j * np.array([[0, -1j], [1j, 0]]))
    assert (A * 2.0 + B).is_hermitian()
    assert not OperatorMatrix((2,), SM).is_hermitian()
