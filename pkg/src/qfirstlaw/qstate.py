"""Quantum-state and Hamiltonian domain types.

Pure-state preparation on the Bloch sphere, density-operator validation,
internal energy, and (possibly time-dependent) Hamiltonians whose entries
are expressions over t.  Hermiticity of a Hamiltonian is enforced by
construction: only the diagonal and the upper triangle are stored, the
lower triangle is their conjugate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cxmat, exprparse
from .exprparse import Expression


@dataclass(frozen=True)
class InitialStatePrep:
    """Bloch angles of the prepared pure state cos(theta)|g> + e^{i phi} sin(theta)|e>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")


@dataclass(frozen=True)
class DensityOperator:
    """Thin wrapper around a square complex matrix.

    Construction only checks shape and finiteness; the physics invariants
    (Hermitian, unit trace, positive semidefinite) are checked by
    validate_density so that deliberately broken inputs can still be built
    and reported on.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = cxmat.as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise cxmat.ShapeError(f"density operator must be square, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def prepare_pure_state(prep: InitialStatePrep) -> DensityOperator:
    """Rank-1 projector |psi><psi| for the Bloch-angle preparation."""
    amp = np.array(
        [math.cos(prep.theta), np.exp(1j * prep.phi) * math.sin(prep.theta)],
        dtype=np.complex128,
    )
    return DensityOperator(np.outer(amp, amp.conj()))


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    deviation: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        return "; ".join(
            f"{c.name}: {'ok' if c.passed else 'FAIL'} ({c.deviation:.3e} vs {c.bound:.3e})"
            for c in self.checks
        )


def validate_density(rho: DensityOperator, tol: float = 1e-12) -> ValidationReport:
    """Check Hermiticity and unit trace within ``tol`` and positive
    semidefiniteness down to -max(tol, 1e-10).

    The PSD floor never tightens below 1e-10: pure states carry an exactly
    zero eigenvalue and round-off must not reject them.
    """
    m = rho.matrix
    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    trace_dev = abs(complex(np.trace(m)) - 1.0)
    psd_floor = max(tol, 1e-10)
    # Eigenvalues of the Hermitian part, so the PSD check stays meaningful
    # even when the Hermiticity check itself fails.
    eig = cxmat.hermitian_eigen(0.5 * (m + m.conj().T), tol=1.0)
    min_eig = float(eig.eigenvalues[0])
    return ValidationReport(
        (
            ValidationCheck("hermiticity", herm_dev, tol, herm_dev <= tol),
            ValidationCheck("trace", trace_dev, tol, trace_dev <= tol),
            ValidationCheck("positivity", min_eig, -psd_floor, min_eig >= -psd_floor),
        )
    )


class Hamiltonian:
    """Hermitian-by-construction matrix of expression-valued entries.

    Diagonal entries are real-valued expressions; each upper-triangle entry
    is a (real-part, imaginary-part) pair of expressions and the mirrored
    lower-triangle entry is its conjugate.
    """

    def __init__(self, diag, upper=None):
        self._diag: tuple[Expression, ...] = tuple(exprparse.as_expression(e) for e in diag)
        self._dim = len(self._diag)
        entries: dict[tuple[int, int], tuple[Expression, Expression]] = {}
        for (i, j), (re_part, im_part) in (upper or {}).items():
            if not 0 <= i < j < self._dim:
                raise ValueError(f"upper-triangle index out of range: {(i, j)}")
            entries[(i, j)] = (
                exprparse.as_expression(re_part),
                exprparse.as_expression(im_part),
            )
        self._upper = entries

    @classmethod
    def two_level(cls, e_g=0.0, e_e=1.0) -> "Hamiltonian":
        """diag(E_g, E_e); entries may be numbers or expressions over t."""
        return cls([e_g, e_e])

    @classmethod
    def diagonal(cls, entries) -> "Hamiltonian":
        return cls(list(entries))

    @classmethod
    def from_matrix(cls, m, tol: float = 1e-12) -> "Hamiltonian":
        """Constant Hamiltonian from an explicit Hermitian matrix."""
        m = cxmat.as_matrix(m)
        if m.shape[0] != m.shape[1]:
            raise cxmat.ShapeError(f"Hamiltonian must be square, got {m.shape}")
        dev = float(np.max(np.abs(m - m.conj().T)))
        if dev > tol:
            raise cxmat.NonHermitianError(f"matrix is not Hermitian: deviation {dev:.3e}")
        diag = [float(m[i, i].real) for i in range(m.shape[0])]
        upper = {
            (i, j): (float(m[i, j].real), float(m[i, j].imag))
            for i in range(m.shape[0])
            for j in range(i + 1, m.shape[0])
            if m[i, j] != 0
        }
        return cls(diag, upper)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def is_diagonal(self) -> bool:
        return not self._upper

    def matrix(self, t: float) -> np.ndarray:
        """Evaluate all entries at time t; the result is Hermitian exactly."""
        out = np.zeros((self._dim, self._dim), dtype=np.complex128)
        for i, expr in enumerate(self._diag):
            out[i, i] = exprparse.evaluate(expr, t)
        for (i, j), (re_part, im_part) in self._upper.items():
            value = complex(exprparse.evaluate(re_part, t), exprparse.evaluate(im_part, t))
            out[i, j] = value
            out[j, i] = value.conjugate()
        return out

    def diagonal_values(self, t: float) -> np.ndarray:
        return np.array([exprparse.evaluate(expr, t) for expr in self._diag], dtype=float)


@dataclass(frozen=True)
class EnergyEigenbasis:
    """Energies E_n with the unitary whose columns are the eigenvectors |n>."""

    energies: np.ndarray
    basis: np.ndarray


def energy_eigenbasis(h: Hamiltonian, t: float = 0.0) -> EnergyEigenbasis:
    """Eigenbasis of H(t).

    Diagonal Hamiltonians short-circuit to the computational basis in entry
    order, with no numerical perturbation; anything else goes through the
    Jacobi eigensolver (ascending energies).
    """
    if h.is_diagonal:
        return EnergyEigenbasis(h.diagonal_values(t), np.eye(h.dim, dtype=np.complex128))
    eig = cxmat.hermitian_eigen(h.matrix(t))
    return EnergyEigenbasis(eig.eigenvalues, eig.eigenvectors)


def internal_energy(rho: DensityOperator, h: Hamiltonian, t: float = 0.0) -> float:
    """U = Tr(rho H(t)); the imaginary residue must stay below 1e-12."""
    hm = h.matrix(t)
    if hm.shape[0] != rho.dim:
        raise cxmat.ShapeError(
            f"dimension mismatch: state dim {rho.dim}, Hamiltonian dim {hm.shape[0]}"
        )
    value = complex(np.trace(rho.matrix @ hm))
    if abs(value.imag) > 1e-12:
        raise cxmat.NumericError(
            f"internal energy has non-negligible imaginary part {value.imag:.3e}"
        )
    return value.real
