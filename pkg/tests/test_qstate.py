import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfirstlaw import cxmat, qstate
from qfirstlaw.qstate import (
    DensityOperator,
    Hamiltonian,
    InitialStatePrep,
    energy_eigenbasis,
    internal_energy,
    prepare_pure_state,
    validate_density,
)

angles_theta = st.floats(min_value=0.0, max_value=math.pi / 2, allow_nan=False)
angles_phi = st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True, allow_nan=False)


class TestPreparePureState:
    def test_ground_state(self):
        rho = prepare_pure_state(InitialStatePrep(0.0))
        assert np.array_equal(rho.matrix, np.diag([1.0, 0.0]).astype(complex))

    def test_reference_angle(self):
        rho = prepare_pure_state(InitialStatePrep(math.pi / 6))
        expected = np.array(
            [[0.75, math.sqrt(3) / 4], [math.sqrt(3) / 4, 0.25]], dtype=complex
        )
        assert np.allclose(rho.matrix, expected, atol=1e-15)

    def test_equator_with_pi_phase(self):
        rho = prepare_pure_state(InitialStatePrep(math.pi / 4, math.pi))
        expected = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)
        assert np.allclose(rho.matrix, expected, atol=1e-15)

    @given(angles_theta, angles_phi)
    def test_valid_and_idempotent(self, theta, phi):
        rho = prepare_pure_state(InitialStatePrep(theta, phi))
        assert validate_density(rho).passed
        assert np.max(np.abs(rho.matrix @ rho.matrix - rho.matrix)) <= 1e-12

    def test_theta_out_of_range(self):
        with pytest.raises(ValueError):
            InitialStatePrep(math.pi)

    def test_phi_out_of_range(self):
        with pytest.raises(ValueError):
            InitialStatePrep(0.3, 2 * math.pi)


class TestValidateDensity:
    def test_pure_state_passes(self):
        report = validate_density(prepare_pure_state(InitialStatePrep(math.pi / 6)))
        assert report.passed

    def test_negative_eigenvalue_fails(self):
        rho = DensityOperator(np.array([[0.6, 0.6], [0.6, 0.4]], dtype=complex))
        report = validate_density(rho)
        assert not report.passed
        by_name = {c.name: c for c in report.checks}
        assert by_name["hermiticity"].passed
        assert by_name["trace"].passed
        assert not by_name["positivity"].passed
        # independent 2x2 oracle: 0.5*((a+d) - sqrt((a-d)^2 + 4 b^2))
        expected_min = 0.5 * (1.0 - math.sqrt(0.2**2 + 4 * 0.6**2))
        assert by_name["positivity"].deviation == pytest.approx(expected_min, abs=1e-12)

    def test_wrong_trace_fails(self):
        rho = DensityOperator(np.diag([0.5, 0.4]).astype(complex))
        report = validate_density(rho)
        by_name = {c.name: c for c in report.checks}
        assert not by_name["trace"].passed
        assert by_name["positivity"].passed

    def test_non_hermitian_fails(self):
        rho = DensityOperator(np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex))
        assert not validate_density(rho).passed

    def test_pure_state_zero_eigenvalue_not_rejected(self):
        # round-off on the exactly-zero eigenvalue must stay inside the floor
        report = validate_density(prepare_pure_state(InitialStatePrep(0.7, 1.3)))
        assert report.passed

    def test_summary_mentions_failures(self):
        rho = DensityOperator(np.diag([0.5, 0.4]).astype(complex))
        assert "FAIL" in validate_density(rho).summary()


class TestInternalEnergy:
    def test_reference_angle(self):
        rho = prepare_pure_state(InitialStatePrep(math.pi / 6))
        h = Hamiltonian.two_level(0.0, 1.0)
        assert internal_energy(rho, h) == pytest.approx(0.25, abs=1e-15)

    def test_ground_state_energy(self):
        rho = DensityOperator(np.diag([1.0, 0.0]).astype(complex))
        h = Hamiltonian.two_level(-0.7, 2.3)
        assert internal_energy(rho, h) == pytest.approx(-0.7, abs=1e-15)

    def test_dim_mismatch(self):
        rho = DensityOperator(np.eye(3, dtype=complex) / 3)
        with pytest.raises(cxmat.ShapeError):
            internal_energy(rho, Hamiltonian.two_level())

    @given(angles_theta, st.floats(-5, 5), st.floats(-5, 5))
    def test_linear_in_hamiltonian(self, theta, e_g, e_e):
        rho = prepare_pure_state(InitialStatePrep(theta))
        u = internal_energy(rho, Hamiltonian.two_level(e_g, e_e))
        expected = e_g * math.cos(theta) ** 2 + e_e * math.sin(theta) ** 2
        assert u == pytest.approx(expected, abs=1e-12)

    @given(angles_theta, st.floats(-5, 5))
    def test_shift_by_identity(self, theta, shift):
        rho = prepare_pure_state(InitialStatePrep(theta))
        base = internal_energy(rho, Hamiltonian.two_level(0.0, 1.0))
        shifted = internal_energy(rho, Hamiltonian.two_level(shift, 1.0 + shift))
        assert shifted == pytest.approx(base + shift, abs=1e-12)


class TestHamiltonian:
    def test_diagonal_constant(self):
        h = Hamiltonian.two_level(0.0, 1.0)
        assert h.is_diagonal
        assert np.array_equal(h.matrix(3.7), np.diag([0.0, 1.0]).astype(complex))

    def test_driven_diagonal(self):
        h = Hamiltonian.diagonal([0.0, "1+0.1*t"])
        assert h.matrix(2.0)[1, 1] == pytest.approx(1.2, abs=1e-15)

    def test_from_matrix_hermitian_by_construction(self):
        m = np.array([[0.5, 0.5j], [-0.5j, 0.5]], dtype=complex)
        h = Hamiltonian.from_matrix(m)
        assert not h.is_diagonal
        assert np.array_equal(h.matrix(0.0), m)

    def test_from_matrix_rejects_non_hermitian(self):
        with pytest.raises(cxmat.NonHermitianError):
            Hamiltonian.from_matrix(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_expression_entries_stay_hermitian(self):
        h = Hamiltonian([0.0, "t"], {(0, 1): ("cos(t)", "sin(t)")})
        m = h.matrix(0.9)
        assert np.max(np.abs(m - m.conj().T)) == 0.0
        assert m[0, 1] == pytest.approx(complex(math.cos(0.9), math.sin(0.9)), abs=1e-15)


class TestEnergyEigenbasis:
    def test_diagonal_exact_identity(self):
        basis = energy_eigenbasis(Hamiltonian.two_level(0.0, 1.0))
        assert np.array_equal(basis.energies, np.array([0.0, 1.0]))
        assert np.array_equal(basis.basis, np.eye(2, dtype=complex))

    def test_sigma_x(self):
        h = Hamiltonian.from_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
        basis = energy_eigenbasis(h)
        assert np.allclose(basis.energies, [-1.0, 1.0], atol=1e-15)
        inv_sqrt2 = 1 / math.sqrt(2)
        assert np.allclose(basis.basis[:, 0], [inv_sqrt2, -inv_sqrt2], atol=1e-15)
        assert np.allclose(basis.basis[:, 1], [inv_sqrt2, inv_sqrt2], atol=1e-15)

    def test_eigen_residual_general(self):
        h = Hamiltonian([0.3, 1.7], {(0, 1): (0.2, 0.4)})
        basis = energy_eigenbasis(h, 0.0)
        m = h.matrix(0.0)
        resid = np.max(np.abs(m @ basis.basis - basis.basis * basis.energies))
        assert resid <= 1e-10

    def test_driven_diagonal_keeps_entry_order(self):
        h = Hamiltonian.diagonal(["1+t", "0.5"])
        basis = energy_eigenbasis(h, 0.0)
        # entry order, not sorted: the first branch is the first diagonal entry
        assert np.array_equal(basis.energies, np.array([1.0, 0.5]))


def test_density_operator_requires_square():
    with pytest.raises(cxmat.ShapeError):
        DensityOperator(np.ones((2, 3)))


def test_density_operator_rejects_non_finite():
    m = np.eye(2, dtype=complex)
    m[1, 1] = np.inf
    with pytest.raises(cxmat.NumericError):
        DensityOperator(m)
