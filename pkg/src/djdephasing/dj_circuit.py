"""
Two-qubit Deutsch-Jozsa circuit with marked noise-injection slots.

Qubit 0 is the query qubit, qubit 1 the ancilla. The gate sequence is::

    X(1) H(1) H(0) [slot 0] U_f [slot 1] H(0) [slot 2]

Slots are placeholders that are later bound either to RZ phase gates
(:func:`bind_phase_noise`) or to a Kraus channel on qubit 0
(:func:`simulate_density`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import quantum_state as qs
from .errors import ArgumentError
from .quantum_state import CNOT, H, X, DensityMatrix, Gate, KrausSet, Statevector

QUERY = 0
ANCILLA = 1
NUM_QUBITS = 2


class OracleKind(enum.Enum):
    CONSTANT_ZERO = "constant_zero"
    CONSTANT_ONE = "constant_one"
    BALANCED_IDENTITY = "balanced_identity"
    BALANCED_NOT = "balanced_not"

    @property
    def is_balanced(self) -> bool:
        return self in (OracleKind.BALANCED_IDENTITY, OracleKind.BALANCED_NOT)

    def f(self, x: int) -> int:
        return {
            OracleKind.CONSTANT_ZERO: 0,
            OracleKind.CONSTANT_ONE: 1,
            OracleKind.BALANCED_IDENTITY: x,
            OracleKind.BALANCED_NOT: 1 - x,
        }[self]


@dataclass(frozen=True)
class NoiseSlot:
    slot_index: int


CircuitOp = Union[Gate, NoiseSlot]


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[CircuitOp, ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        slots = [op.slot_index for op in self.ops if isinstance(op, NoiseSlot)]
        if slots != list(range(len(slots))):
            raise ArgumentError(f"noise slots must be numbered 0,1,2,... in order, got {slots}")

    @property
    def num_slots(self) -> int:
        return sum(isinstance(op, NoiseSlot) for op in self.ops)

    @property
    def gates(self) -> list[Gate]:
        return [op for op in self.ops if isinstance(op, Gate)]


def oracle_gates(oracle: OracleKind) -> list[Gate]:
    if oracle is OracleKind.CONSTANT_ZERO:
        return []
    if oracle is OracleKind.CONSTANT_ONE:
        return [X(ANCILLA)]
    if oracle is OracleKind.BALANCED_IDENTITY:
        return [CNOT(QUERY, ANCILLA)]
    return [X(QUERY), CNOT(QUERY, ANCILLA), X(QUERY)]


def build_dj_circuit(oracle: OracleKind) -> Circuit:
    ops: list[CircuitOp] = [X(ANCILLA), H(ANCILLA), H(QUERY), NoiseSlot(0)]
    ops += oracle_gates(oracle)
    ops += [NoiseSlot(1), H(QUERY), NoiseSlot(2)]
    return Circuit(NUM_QUBITS, ops)


def expected_outcome(oracle: OracleKind) -> int:
    """Ideal query-qubit measurement: 0 for constant, 1 for balanced."""
    return 1 if oracle.is_balanced else 0


def bind_phase_noise(circuit: Circuit, phases: Sequence[float]) -> Circuit:
    """Replace slot ``j`` with ``RZ(phases[j])`` on the query qubit."""
    phases = list(phases)
    if len(phases) != circuit.num_slots:
        raise ArgumentError(f"need {circuit.num_slots} phases, got {len(phases)}")
    ops = [qs.RZ(phases[op.slot_index], QUERY) if isinstance(op, NoiseSlot) else op for op in circuit.ops]
    return Circuit(circuit.num_qubits, ops)


def simulate_statevector(circuit: Circuit) -> Statevector:
    """Evolve ``|0...0>``; unbound slots are skipped."""
    return qs.run_gates(qs.new_basis_state(circuit.num_qubits, 0), circuit.gates)


def simulate_density(circuit: Circuit, kraus: KrausSet | None = None) -> DensityMatrix:
    """Evolve ``|0...0><0...0|`` applying ``kraus`` to the query qubit at every slot."""
    rho = qs.state_to_density(qs.new_basis_state(circuit.num_qubits, 0))
    for op in circuit.ops:
        if isinstance(op, NoiseSlot):
            if kraus is not None:
                rho = qs.apply_kraus(rho, kraus, QUERY)
        else:
            rho = qs.apply_gate_density(rho, op)
    return rho


def simulate_phase_batch(circuit: Circuit, phases: np.ndarray) -> np.ndarray:
    """Final amplitudes for many phase bindings at once.

    ``phases`` has shape ``(batch, num_slots)``; row ``b`` gives the same
    amplitudes as ``simulate_statevector(bind_phase_noise(circuit, phases[b]))``.
    Returns an array of shape ``(batch, 2**num_qubits)``.
    """
    phases = np.asarray(phases, dtype=float)
    if phases.ndim != 2 or phases.shape[1] != circuit.num_slots:
        raise ArgumentError(f"phases must have shape (batch, {circuit.num_slots}), got {phases.shape}")
    n = circuit.num_qubits
    a = np.zeros((phases.shape[0], 2**n), dtype=complex)
    a[:, 0] = 1.0
    for op in circuit.ops:
        if isinstance(op, NoiseSlot):
            a = qs.apply_phase(a, phases[:, op.slot_index], QUERY, n)
        else:
            a = qs.apply_gate_array(a, op, n)
    return a


def success_probability(state: Statevector | DensityMatrix, oracle: OracleKind) -> float:
    """Probability that the query qubit reads ``expected_outcome(oracle)``."""
    if isinstance(state, DensityMatrix):
        probs = qs.probabilities_qubit_density(state, QUERY)
    else:
        probs = qs.probabilities_qubit(state, QUERY)
    return probs[expected_outcome(oracle)]
