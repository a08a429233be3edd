from .edge_fock import EdgeFockSpace, LOGICAL_BASIS, BASIS_WORDS, EDGE_MIRROR, mirror_transport
from .gates import (
    LogicalGate, REFERENCE_GATES, CNOT_RIGHT_CONTROL, HADAMARD, PAULI_X, PAULI_Z,
    global_phase_distance, gates_equivalent, on_qubit, reference_gate, ideal_transport,
    lift_transport, gate_from_braid, ideal_gate,
)
from .readout import ReadoutReport, readout, measure_logical
from .algorithms import AlgorithmResult, ALGORITHMS, BACKENDS, run_algorithm, oracle_bits, gate_sequence
from .cnot import CnotReport, cnot_two_wire, cnot_sequence, cnot_shots, decode_logical

__all__ = [
    "EdgeFockSpace", "LOGICAL_BASIS", "BASIS_WORDS", "EDGE_MIRROR", "mirror_transport",
    "LogicalGate", "REFERENCE_GATES", "CNOT_RIGHT_CONTROL", "HADAMARD", "PAULI_X", "PAULI_Z",
    "global_phase_distance", "gates_equivalent", "on_qubit", "reference_gate", "ideal_transport",
    "lift_transport", "gate_from_braid", "ideal_gate",
    "ReadoutReport", "readout", "measure_logical",
    "AlgorithmResult", "ALGORITHMS", "BACKENDS", "run_algorithm", "oracle_bits", "gate_sequence",
    "CnotReport", "cnot_two_wire", "cnot_sequence", "cnot_shots", "decode_logical",
]
