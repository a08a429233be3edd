"""
Measurement-based CNOT between the two logical qubits of wire 0, with wire 1 as ancilla.

The control is the right qubit and the target the left one. The entangling factor
exp[i pi/4 gamma_01^R gamma_02^R gamma_01^L gamma_pi^L] is obtained from two parity
measurements, each sandwiched between a braid with the ancilla mode gamma_02^a and its inverse:

    Pi1' = gamma_01^R gamma_02^R gamma_02^a gamma_01^a   after braiding (gamma_pi^L, gamma_02^a)
    Pi2' = i gamma_01^a gamma_02^a                       after braiding (gamma_01^L, gamma_02^a)

Measured outcomes q1, q2 fix the projector signs p1 = -q1, p2 = -q2 of the unbraided
parities, the correction exp[-(pi/4) p2 gamma_02^a gamma_01^L] follows, and the branch
p1 p2 = -1 takes the extra correction exp[(pi/2) gamma_01^R gamma_02^R] exp[(pi/2) gamma_01^L gamma_pi^L].
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..exceptions import IncompatibleModes, InvalidParameters
from ..gaussian import MeasurementRecord, correlation, make_rng, spawn_rngs
from .edge_fock import LOGICAL_BASIS, EdgeFockSpace
from .gates import CNOT_RIGHT_CONTROL, EQUIVALENCE_TOL, LogicalGate, gates_equivalent

logger = logging.getLogger(__name__)

ANCILLA_LABEL = "10"
QUARTER = np.pi / 4

PI_L = ("pi_left", 0)
L1 = ("zero1_left", 0)
R1 = ("zero1_right", 0)
R2 = ("zero2_right", 0)
A1 = ("zero1_left", 1)
A2 = ("zero2_left", 1)


@dataclass
class CnotReport:
    """Outputs of the CNOT sequence for each logical input."""
    outputs: Dict[str, str]
    fidelities: Dict[str, float]
    records: Dict[str, List[MeasurementRecord]]
    gate: Optional[LogicalGate] = None
    branches: Dict[str, int] = field(default_factory=dict)

    @property
    def is_cnot(self):
        if self.gate is not None:
            return gates_equivalent(self.gate, CNOT_RIGHT_CONTROL, EQUIVALENCE_TOL)
        return all(abs(value - 1) <= EQUIVALENCE_TOL for value in self.fidelities.values())

    def to_dict(self):
        return {
            "outputs": self.outputs,
            "fidelities": self.fidelities,
            "branches": self.branches,
            "records": {
                label: [{"pair": list(r.pair), "outcome": r.outcome, "probability": r.probability} for r in records]
                for label, records in self.records.items()
            },
            "is_cnot": self.is_cnot,
        }


def cnot_sequence(edge, psi, force=(None, None), rng=None):
    """
    Apply the braid-measure-correct sequence to a two-wire edge state.

    Parameters:
    - edge: EdgeFockSpace with two wires.
    - psi: FockState with the ancilla pair at i gamma_01^a gamma_02^a = -1.
    - force: measured outcomes (q1, q2), entries may be None.
    - rng: seed or Generator.

    Returns:
    - psi: final FockState.
    - records: two MeasurementRecords (raw outcomes q1, q2).
    - branch: p1 * p2.
    """
    if edge.wires != 2:
        raise InvalidParameters("The CNOT sequence needs a two-wire edge space")
    rng = make_rng(rng)
    g = edge.gamma
    psi = np.asarray(psi)

    psi = edge.pair_exp(QUARTER, PI_L, L1) @ psi
    psi = edge.pair_exp(QUARTER, R1, R2) @ psi

    psi = edge.pair_exp(QUARTER, PI_L, A2) @ psi
    first = g(R1) @ g(R2) @ g(A2) @ g(A1)
    q1, probability1, psi = edge.measure(psi, first, force[0], rng)
    psi = edge.pair_exp(QUARTER, A2, PI_L) @ np.asarray(psi)

    psi = edge.pair_exp(QUARTER, L1, A2) @ psi
    second = 1j * g(A1) @ g(A2)
    q2, probability2, psi = edge.measure(psi, second, force[1], rng)
    psi = edge.pair_exp(QUARTER, A2, L1) @ np.asarray(psi)

    p1, p2 = -q1, -q2
    psi = edge.pair_exp(-QUARTER * p2, A2, L1) @ psi
    if p1 * p2 == -1:
        psi = edge.pair_exp(np.pi / 2, R1, R2) @ edge.pair_exp(np.pi / 2, L1, PI_L) @ psi

    records = [
        MeasurementRecord(("R1 R2", "a2 a1"), q1, probability1, forced=force[0] is not None),
        MeasurementRecord(("i a1", "a2"), q2, probability2, forced=force[1] is not None),
    ]
    return psi / np.linalg.norm(psi), records, p1 * p2


def decode_logical(state, modes, ancilla_modes=None, tol=1e-8):
    """
    Logical label of a wire in a definite basis state, read from its zero-mode parities.

    When ancilla_modes is given its (zero1_left, zero2_left) pair must hold |1>_a.

    Returns:
    - str, one of "00", "01", "10", "11".
    """
    bits = ""
    for side in ("left", "right"):
        value = correlation(state, modes.mode(f"zero1_{side}"), modes.mode(f"zero2_{side}"))
        if abs(abs(value) - 1) > tol:
            raise IncompatibleModes(f"The {side} logical bit is not definite (parity {value:.3f})")
        bits += "0" if value > 0 else "1"
    if ancilla_modes is not None:
        value = correlation(state, ancilla_modes.mode("zero1_left"), ancilla_modes.mode("zero2_left"))
        if abs(value + 1) > tol:
            raise IncompatibleModes(f"Ancilla is not prepared in |1> (parity {value:.3f})")
    return bits


def cnot_two_wire(state=None, modes=None, inputs=None, force=None, rng=None):
    """
    Run the two-wire CNOT sequence and check its logical action.

    Parameters:
    - state: optional two-wire CovarianceState in a logical basis state of wire 0 with the
      ancilla in |1>_a; its label is decoded and used as the single input.
    - modes: list of the two EdgeModeSets, needed with state.
    - inputs: logical labels to run (default all four).
    - force: measured outcomes (q1, q2) applied to every input, or None for random outcomes.
    - rng: seed or Generator.

    Returns:
    - CnotReport instance; with both outcomes forced and all four inputs, report.gate is
      the 4x4 logical matrix of the branch.
    """
    if state is not None:
        if modes is None or len(modes) != 2:
            raise InvalidParameters("Decoding a covariance state needs the EdgeModeSets of both wires")
        inputs = [decode_logical(state, modes[0], modes[1])]
    inputs = list(inputs or LOGICAL_BASIS)
    force = tuple(force) if force is not None else (None, None)
    if len(force) != 2:
        raise InvalidParameters("force must hold two outcomes")

    edge = EdgeFockSpace(wires=2)
    basis = edge.logical_basis([ANCILLA_LABEL])
    rng = make_rng(rng)
    outputs, fidelities, records, branches, columns = {}, {}, {}, {}, {}
    for label in inputs:
        psi, shot_records, branch = cnot_sequence(edge, edge.logical_state([label, ANCILLA_LABEL]), force, rng)
        amplitudes = basis.conj().T @ psi
        expected = CNOT_RIGHT_CONTROL[:, LOGICAL_BASIS.index(label)]
        outputs[label] = LOGICAL_BASIS[int(np.argmax(np.abs(amplitudes)))]
        fidelities[label] = float(abs(np.vdot(expected, amplitudes)) ** 2)
        records[label] = shot_records
        branches[label] = branch
        columns[label] = amplitudes

    gate = None
    if None not in force and set(inputs) == set(LOGICAL_BASIS):
        gate = LogicalGate(np.column_stack([columns[label] for label in LOGICAL_BASIS]), name="cnot", check=False)
    report = CnotReport(outputs, fidelities, records, gate, branches)
    logger.info("CNOT outputs %s (forced %s)", outputs, force)
    return report


def cnot_shots(label, shots=1000, seed=None):
    """
    Repeat the sequence with random outcomes on one input.

    Returns:
    - dict with the count of q1 = +1, q2 = +1, p1 p2 = +1 and of successful runs.
    """
    edge = EdgeFockSpace(wires=2)
    basis = edge.logical_basis([ANCILLA_LABEL])
    expected = CNOT_RIGHT_CONTROL[:, LOGICAL_BASIS.index(label)]
    counts = {"q1_plus": 0, "q2_plus": 0, "branch_plus": 0, "success": 0, "shots": shots}
    for rng in spawn_rngs(seed, shots):
        psi, records, branch = cnot_sequence(edge, edge.logical_state([label, ANCILLA_LABEL]), rng=rng)
        counts["q1_plus"] += records[0].outcome == 1
        counts["q2_plus"] += records[1].outcome == 1
        counts["branch_plus"] += branch == 1
        counts["success"] += abs(np.vdot(expected, basis.conj().T @ psi)) ** 2 > 1 - EQUIVALENCE_TOL
    return counts
