"""Kraus-channel representations: builtin non-dissipative channels,
expression-defined custom channels, CPTP validation, and state evolution.

Builtin channels are parameterized cumulatively from t = 0: the Kraus set
at time t maps rho(0) directly to rho(t) (gamma(t) and p(t) below), exactly
as the closed-form evolved states are written.  Incremental composition of
short-time maps is deliberately not offered; the flip family's off-diagonal
factor (2 e^{-rate t} - 1) changes sign and the family is not divisible
across that zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import cxmat, exprparse
from .exprparse import Expression
from .qstate import DensityOperator

PHASE_DAMPING = "phase_damping"
PHASE_FLIP = "phase_flip"
BIT_FLIP = "bit_flip"
BIT_PHASE_FLIP = "bit_phase_flip"
CUSTOM = "custom"

BUILTIN_KINDS = (PHASE_DAMPING, PHASE_FLIP, BIT_FLIP, BIT_PHASE_FLIP)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

_FLIP_PAULI = {PHASE_FLIP: PAULI_Z, BIT_FLIP: PAULI_X, BIT_PHASE_FLIP: PAULI_Y}

_IDENTITY_2 = np.eye(2, dtype=np.complex128)
_IDENTITY_CACHE: dict[int, np.ndarray] = {2: _IDENTITY_2}


def _identity(dim: int) -> np.ndarray:
    eye = _IDENTITY_CACHE.get(dim)
    if eye is None:
        eye = _IDENTITY_CACHE[dim] = np.eye(dim, dtype=np.complex128)
    return eye


class CptpError(RuntimeError):
    """A Kraus set failed the completeness check sum_i K_i† K_i = I."""

    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators instantiated at one time, all d x d."""

    operators: tuple[np.ndarray, ...]
    time_label: float

    def __post_init__(self):
        ops = tuple(cxmat.as_matrix(k) for k in self.operators)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise cxmat.ShapeError(
                    f"all Kraus operators must be {dim}x{dim}, got {k.shape}"
                )
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True)
class CptpReport:
    deviation: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.bound


# One custom Kraus operator is a grid of (re, im) expression pairs.
CustomOperator = tuple[tuple[tuple[Expression, Expression], ...], ...]


@dataclass(frozen=True)
class ChannelSpec:
    """A time-parameterized family of Kraus sets.

    Builtins carry a decay/dephasing rate; custom channels carry
    expression-valued operator entries evaluated at the requested time.
    """

    kind: str
    rate: float = 1.0
    dim: int = 2
    custom_operators: tuple[CustomOperator, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind in BUILTIN_KINDS:
            if self.rate <= 0:
                raise ValueError(f"rate must be positive, got {self.rate}")
            if self.dim != 2:
                raise ValueError("builtin channels are qubit channels (dim 2)")
        elif self.kind == CUSTOM:
            if not self.custom_operators:
                raise ValueError("custom channel needs at least one Kraus operator")
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")

    # -- constructors -------------------------------------------------

    @classmethod
    def phase_damping(cls, rate: float = 1.0) -> "ChannelSpec":
        return cls(PHASE_DAMPING, rate=rate)

    @classmethod
    def phase_flip(cls, rate: float = 1.0) -> "ChannelSpec":
        return cls(PHASE_FLIP, rate=rate)

    @classmethod
    def bit_flip(cls, rate: float = 1.0) -> "ChannelSpec":
        return cls(BIT_FLIP, rate=rate)

    @classmethod
    def bit_phase_flip(cls, rate: float = 1.0) -> "ChannelSpec":
        return cls(BIT_PHASE_FLIP, rate=rate)

    @classmethod
    def custom(cls, operators, dim: int | None = None) -> "ChannelSpec":
        """Custom channel from nested entries; each entry is a value accepted
        by exprparse.as_expression or an (re, im) pair of such values.
        The operator set must be CPTP at t = 0."""
        parsed = []
        for op in operators:
            rows = []
            for row in op:
                cells = []
                for entry in row:
                    if isinstance(entry, (tuple, list)):
                        if len(entry) != 2:
                            raise ValueError(
                                f"matrix entry must be a [re, im] pair, got {entry!r}"
                            )
                        re_part, im_part = entry
                    else:
                        re_part, im_part = entry, 0.0
                    cells.append(
                        (exprparse.as_expression(re_part), exprparse.as_expression(im_part))
                    )
                rows.append(tuple(cells))
            parsed.append(tuple(rows))
        d = dim if dim is not None else len(parsed[0])
        for op in parsed:
            if len(op) != d or any(len(row) != d for row in op):
                raise ValueError(f"custom Kraus operators must all be {d}x{d}")
        spec = cls(CUSTOM, dim=d, custom_operators=tuple(parsed))
        report = validate_cptp(kraus_at(spec, 0.0), tol=1e-10)
        if not report.passed:
            raise CptpError(
                f"custom channel is not CPTP at t=0: deviation {report.deviation:.3e}",
                report.deviation,
            )
        return spec

    @classmethod
    def identity(cls, dim: int = 2) -> "ChannelSpec":
        """The do-nothing channel (single identity Kraus operator)."""
        op = [[(1.0 if i == j else 0.0, 0.0) for j in range(dim)] for i in range(dim)]
        return cls.custom([op], dim=dim)

    @classmethod
    def from_json(cls, source) -> "ChannelSpec":
        """Build a custom channel from the documented JSON schema:
        {"kind": "custom", "dim": d, "kraus": [matrix, ...]} with each
        matrix entry a two-element ["re_expr", "im_expr"] pair."""
        obj = json.loads(source) if isinstance(source, str) else source
        if not isinstance(obj, dict):
            raise ValueError("channel JSON must be an object")
        if obj.get("kind") != CUSTOM:
            raise ValueError(f"channel JSON kind must be 'custom', got {obj.get('kind')!r}")
        if "kraus" not in obj:
            raise ValueError("channel JSON is missing the 'kraus' list")
        return cls.custom(obj["kraus"], dim=obj.get("dim"))

    # -- time bookkeeping ---------------------------------------------

    def physical_time(self, tau: float) -> float:
        """Physical time for a dimensionless time tau = rate * t.  Custom
        channels have no rate and take the grid variable as-is."""
        return tau / self.rate if self.kind in BUILTIN_KINDS else tau


def kraus_at(spec: ChannelSpec, t: float) -> KrausSet:
    """Instantiate the channel's Kraus operators at time t >= 0."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if spec.kind == PHASE_DAMPING:
        # gamma = 1 - exp(-rate*t), via expm1 for small-t accuracy
        gamma = -math.expm1(-spec.rate * t)
        k1 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
        k2 = np.array([[0.0, 0.0], [0.0, math.sqrt(gamma)]], dtype=np.complex128)
        return KrausSet((k1, k2), t)
    if spec.kind in _FLIP_PAULI:
        p = -math.expm1(-spec.rate * t)
        k1 = math.sqrt(1.0 - p) * _IDENTITY_2
        k2 = math.sqrt(p) * _FLIP_PAULI[spec.kind]
        return KrausSet((k1, k2), t)
    ops = []
    for op_index, op in enumerate(spec.custom_operators):
        matrix = np.zeros((spec.dim, spec.dim), dtype=np.complex128)
        for i, row in enumerate(op):
            for j, (re_part, im_part) in enumerate(row):
                try:
                    matrix[i, j] = complex(
                        exprparse.evaluate(re_part, t), exprparse.evaluate(im_part, t)
                    )
                except exprparse.DomainError as exc:
                    raise exprparse.DomainError(
                        f"custom channel operator {op_index} entry ({i},{j}) at t={t}: {exc}",
                        exc.position,
                    ) from exc
        ops.append(matrix)
    return KrausSet(tuple(ops), t)


def completeness_deviation(kraus: KrausSet) -> float:
    """max-norm of sum_i K_i† K_i - I."""
    total = np.zeros((kraus.dim, kraus.dim), dtype=np.complex128)
    for k in kraus.operators:
        total += k.conj().T @ k
    return float(np.max(np.abs(total - _identity(kraus.dim))))


def validate_cptp(kraus: KrausSet, tol: float = 1e-12) -> CptpReport:
    return CptpReport(completeness_deviation(kraus), tol)


def apply(kraus: KrausSet, rho: DensityOperator, cptp_tol: float = 1e-10) -> DensityOperator:
    """sum_i K_i rho K_i†, refusing Kraus sets that fail CPTP within cptp_tol."""
    if kraus.dim != rho.dim:
        raise cxmat.ShapeError(
            f"dimension mismatch: Kraus dim {kraus.dim}, state dim {rho.dim}"
        )
    report = validate_cptp(kraus, tol=cptp_tol)
    if not report.passed:
        raise CptpError(
            f"Kraus set at t={kraus.time_label} is not CPTP: "
            f"deviation {report.deviation:.3e} > {cptp_tol:.3e}",
            report.deviation,
        )
    out = np.zeros_like(rho.matrix)
    for k in kraus.operators:
        out += k @ rho.matrix @ k.conj().T
    evolved = DensityOperator(out)
    trace_drift = abs(out.trace() - rho.matrix.trace())
    if trace_drift > 1e-12:
        raise cxmat.NumericError(
            f"trace drifted by {trace_drift:.3e} under a CPTP-validated set"
        )
    return evolved


def evolve(spec: ChannelSpec, rho0: DensityOperator, t: float) -> DensityOperator:
    """State at time t from the cumulative map: apply(kraus_at(spec, t), rho0)."""
    return apply(kraus_at(spec, t), rho0)
