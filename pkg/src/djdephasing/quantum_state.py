"""
Dense pure- and mixed-state simulation of a small qubit register.

Basis index ordering is little-endian: bit ``q`` of the index is the value of
qubit ``q``, so qubit 0 (the query qubit) is the least significant bit.

The gate kernels act on the last axis of an array of shape ``(..., 2**n)``,
so the same code path serves a single statevector, a batch of statevectors,
and the two sides of a density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArgumentError, InvalidChannelError

MAX_QUBITS = 4
TOL = 1e-12

GATE_KINDS = ("H", "X", "Z", "CNOT", "RZ")

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_FIXED_1Q = {
    "H": np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_num_qubits(num_qubits: int) -> None:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ArgumentError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")


def _check_qubit(qubit: int, num_qubits: int) -> None:
    if not 0 <= qubit < num_qubits:
        raise ArgumentError(f"qubit {qubit} out of range for {num_qubits}-qubit register")


@dataclass(frozen=True)
class Gate:
    """A gate from the fixed set {H, X, Z, CNOT, RZ}.

    ``targets`` is ``(qubit,)`` for single-qubit gates and ``(control, target)``
    for CNOT. ``phase`` is only meaningful for RZ, whose matrix is
    ``diag(1, exp(i*phase))``.
    """

    kind: str
    targets: tuple[int, ...]
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ArgumentError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        arity = 2 if self.kind == "CNOT" else 1
        if len(self.targets) != arity:
            raise ArgumentError(f"{self.kind} takes {arity} target(s), got {self.targets}")
        if self.kind == "CNOT" and self.targets[0] == self.targets[1]:
            raise ArgumentError("CNOT control and target must differ")
        if self.kind != "RZ" and self.phase != 0.0:
            raise ArgumentError(f"{self.kind} takes no phase")

    def matrix(self) -> np.ndarray:
        """Matrix of the gate on its own qubits (2x2, or 4x4 for CNOT).

        The 4x4 CNOT matrix uses local index ``control + 2*target``.
        """
        if self.kind == "RZ":
            return np.array([[1, 0], [0, np.exp(1j * self.phase)]], dtype=complex)
        if self.kind == "CNOT":
            m = np.zeros((4, 4), dtype=complex)
            for c in (0, 1):
                for t in (0, 1):
                    m[c + 2 * (t ^ c), c + 2 * t] = 1
            return m
        return _FIXED_1Q[self.kind].copy()


def H(qubit: int) -> Gate:
    return Gate("H", (qubit,))


def X(qubit: int) -> Gate:
    return Gate("X", (qubit,))


def Z(qubit: int) -> Gate:
    return Gate("Z", (qubit,))


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def RZ(phase: float, qubit: int) -> Gate:
    return Gate("RZ", (qubit,), float(phase))


@dataclass(frozen=True)
class KrausSet:
    """Single-qubit channel given by 2x2 Kraus operators."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(e, dtype=complex) for e in self.operators)
        if not ops or any(e.shape != (2, 2) for e in ops):
            raise ArgumentError("Kraus operators must be a non-empty list of 2x2 matrices")
        for e in ops:
            e.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    def completeness_error(self) -> float:
        """Max-norm deviation of sum(E^dag E) from the identity."""
        total = sum(e.conj().T @ e for e in self.operators)
        return float(np.max(np.abs(total - np.eye(2))))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_num_qubits(self.num_qubits)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.num_qubits,):
            raise ArgumentError(f"expected {2**self.num_qubits} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ArgumentError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class DensityMatrix:
    num_qubits: int
    elements: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_num_qubits(self.num_qubits)
        rho = np.array(self.elements, dtype=complex)
        dim = 2**self.num_qubits
        if rho.shape != (dim, dim):
            raise ArgumentError(f"expected {dim}x{dim} matrix, got shape {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise ArgumentError("density matrix entries must be finite")
        object.__setattr__(self, "elements", _frozen(rho))

    def trace(self) -> complex:
        return complex(np.trace(self.elements))

    def diagonal(self) -> np.ndarray:
        return self.elements.diagonal().real.copy()


# -- index-pair kernels -------------------------------------------------------


def _split(a: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    # view with axes (..., high bits, bit `qubit`, low bits)
    return a.reshape(a.shape[:-1] + (2 ** (num_qubits - 1 - qubit), 2, 2**qubit))


def apply_1q_matrix(a: np.ndarray, m: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    """Apply the 2x2 matrix ``m`` to ``qubit`` along the last axis of ``a``."""
    v = _split(a, qubit, num_qubits)
    a0 = v[..., 0, :]
    a1 = v[..., 1, :]
    out = np.empty(v.shape, dtype=complex)
    out[..., 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    out[..., 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    return out.reshape(a.shape)


def apply_phase(a: np.ndarray, phases: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    """Apply RZ with per-row phases: ``phases`` broadcasts against ``a.shape[:-1]``.

    Multiplies the qubit=1 half by ``exp(i*phase)``; equals
    :func:`apply_1q_matrix` with ``diag(1, exp(i*phase))`` exactly.
    """
    v = _split(a, qubit, num_qubits).copy()
    factor = np.exp(1j * np.asarray(phases, dtype=float))
    v[..., 1, :] *= np.asarray(factor)[..., None, None]
    return v.reshape(a.shape)


def apply_cnot(a: np.ndarray, control: int, target: int, num_qubits: int) -> np.ndarray:
    """Swap the target-bit pair of every amplitude whose control bit is 1."""
    idx = np.arange(2**num_qubits)
    perm = np.where((idx >> control) & 1, idx ^ (1 << target), idx)
    return a[..., perm]


def apply_gate_array(a: np.ndarray, gate: Gate, num_qubits: int) -> np.ndarray:
    for q in gate.targets:
        _check_qubit(q, num_qubits)
    if gate.kind == "CNOT":
        return apply_cnot(a, gate.targets[0], gate.targets[1], num_qubits)
    if gate.kind == "RZ":
        return apply_phase(a, gate.phase, gate.targets[0], num_qubits)
    return apply_1q_matrix(a, _FIXED_1Q[gate.kind], gate.targets[0], num_qubits)


def _conjugate_by(a: np.ndarray, m: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    # M rho M^dag: M on the row index, then conj(M) on the column index
    left = apply_1q_matrix(np.swapaxes(a, -1, -2), m, qubit, num_qubits)
    return apply_1q_matrix(np.swapaxes(left, -1, -2), m.conj(), qubit, num_qubits)


def apply_gate_density_array(rho: np.ndarray, gate: Gate, num_qubits: int) -> np.ndarray:
    if gate.kind == "CNOT":
        for q in gate.targets:
            _check_qubit(q, num_qubits)
        c, t = gate.targets
        left = apply_cnot(np.swapaxes(rho, -1, -2), c, t, num_qubits)
        return apply_cnot(np.swapaxes(left, -1, -2), c, t, num_qubits)
    _check_qubit(gate.targets[0], num_qubits)
    return _conjugate_by(rho, gate.matrix(), gate.targets[0], num_qubits)


# -- public operations ----------------------------------------------------------


def new_basis_state(num_qubits: int, basis_index: int) -> Statevector:
    _check_num_qubits(num_qubits)
    if not 0 <= basis_index < 2**num_qubits:
        raise ArgumentError(f"basis_index {basis_index} out of range for {num_qubits} qubits")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[basis_index] = 1.0
    return Statevector(num_qubits, amps)


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    return Statevector(state.num_qubits, apply_gate_array(state.amplitudes, gate, state.num_qubits))


def apply_gate_density(rho: DensityMatrix, gate: Gate) -> DensityMatrix:
    """Unitary evolution ``U rho U^dag``."""
    return DensityMatrix(rho.num_qubits, apply_gate_density_array(rho.elements, gate, rho.num_qubits))


def qubit_marginal(probs: np.ndarray, qubit: int, num_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Marginal (p0, p1) of ``qubit`` from basis probabilities along the last axis."""
    v = _split(probs, qubit, num_qubits)
    return v[..., 0, :].sum(axis=(-2, -1)), v[..., 1, :].sum(axis=(-2, -1))


def probabilities_qubit(state: Statevector, qubit: int) -> tuple[float, float]:
    """Computational-basis outcome probabilities of one qubit."""
    _check_qubit(qubit, state.num_qubits)
    p0, p1 = qubit_marginal(np.abs(state.amplitudes) ** 2, qubit, state.num_qubits)
    return float(p0), float(p1)


def probabilities_qubit_density(rho: DensityMatrix, qubit: int) -> tuple[float, float]:
    _check_qubit(qubit, rho.num_qubits)
    p0, p1 = qubit_marginal(rho.diagonal(), qubit, rho.num_qubits)
    return float(p0), float(p1)


def state_to_density(state: Statevector) -> DensityMatrix:
    a = state.amplitudes
    return DensityMatrix(state.num_qubits, np.outer(a, a.conj()))


def apply_kraus(rho: DensityMatrix, kraus: KrausSet, qubit: int) -> DensityMatrix:
    """Apply a single-qubit channel: ``sum_i E_i rho E_i^dag`` with E_i on ``qubit``.

    Raises
    ------
    InvalidChannelError
        If the operators violate completeness by more than 1e-9.
    """
    _check_qubit(qubit, rho.num_qubits)
    err = kraus.completeness_error()
    if err > 1e-9:
        raise InvalidChannelError(f"Kraus completeness violated by {err:.3e}")
    out = np.zeros_like(rho.elements)
    for e in kraus.operators:
        out = out + _conjugate_by(rho.elements, e, qubit, rho.num_qubits)
    return DensityMatrix(rho.num_qubits, out)


def run_gates(state: Statevector, gates: Sequence[Gate]) -> Statevector:
    for g in gates:
        state = apply_gate(state, g)
    return state
