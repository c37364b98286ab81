"""Work / heat / coherence bookkeeping for qubits under non-dissipative
Kraus channels, with closed-form oracles and a verification CLI."""

from .channel import ChannelSpec, KrausSet, apply, evolve, kraus_at, validate_cptp
from .cxmat import HermitianEigenDecomposition, adjoint, hermitian_eigen, mul, trace
from .firstlaw import (
    EnergeticsLedger,
    SpectralSnapshot,
    SpectralTrajectory,
    TimeGrid,
    branch_match,
    integrate_first_law,
    run_energetics,
    spectral_trajectory,
)
from .oracle import (
    OracleConfig,
    OracleIntermediates,
    pd_coherence,
    pd_eigensystem,
    pd_heat,
    pd_intermediates,
    pf_coherence,
    pf_heat,
    pf_intermediates,
)
from .qstate import (
    DensityOperator,
    EnergyEigenbasis,
    Hamiltonian,
    InitialStatePrep,
    energy_eigenbasis,
    internal_energy,
    prepare_pure_state,
    validate_density,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "DensityOperator",
    "EnergeticsLedger",
    "EnergyEigenbasis",
    "Hamiltonian",
    "HermitianEigenDecomposition",
    "InitialStatePrep",
    "KrausSet",
    "OracleConfig",
    "OracleIntermediates",
    "SpectralSnapshot",
    "SpectralTrajectory",
    "TimeGrid",
    "adjoint",
    "apply",
    "branch_match",
    "energy_eigenbasis",
    "evolve",
    "hermitian_eigen",
    "integrate_first_law",
    "internal_energy",
    "kraus_at",
    "mul",
    "pd_coherence",
    "pd_eigensystem",
    "pd_heat",
    "pd_intermediates",
    "pf_coherence",
    "pf_heat",
    "pf_intermediates",
    "prepare_pure_state",
    "run_energetics",
    "spectral_trajectory",
    "trace",
    "validate_cptp",
    "validate_density",
]
