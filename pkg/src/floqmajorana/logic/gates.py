import logging

import numpy as np
from scipy.linalg import polar

from ..exceptions import InvalidParameters, LeakageTooLarge
from .edge_fock import EdgeFockSpace, mirror_transport

logger = logging.getLogger(__name__)

UNITARITY_TOL = 1e-8
EQUIVALENCE_TOL = 1e-6
BRAID_LEAKAGE_TOL = 1e-2

IDENTITY2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# Control on the second (right) qubit, target on the first (left): |01> <-> |11>
CNOT_RIGHT_CONTROL = np.array([
    [1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
], dtype=complex)

# Majorana-pair exponentials exp(theta gamma_a gamma_b) of the named single-qubit gates
REFERENCE_GATES = {
    "P": {"left": ("zero2_left", "zero1_left", np.pi / 4), "right": ("zero2_right", "zero1_right", np.pi / 4)},
    "Z": {"left": ("zero2_left", "zero1_left", np.pi / 2), "right": ("zero2_right", "zero1_right", np.pi / 2)},
    "V": {"left": ("pi_left", "zero2_left", np.pi / 4), "right": ("pi_right", "zero1_right", np.pi / 4)},
    "X": {"left": ("pi_left", "zero1_left", np.pi / 2), "right": ("zero2_right", "pi_right", np.pi / 2)},
    "T": {"left": ("pi_left", "zero2_left", np.pi / 8), "right": ("pi_right", "zero1_right", np.pi / 8)},
}

# Net transport of the left-edge protocols; column j is the image of active mode j
LEFT_TRANSPORTS = {
    "braidA": (("zero1_left", "zero2_left"), np.array([[0.0, 1.0], [-1.0, 0.0]])),
    "braidB": (("pi_left", "zero2_left"), np.array([[0.0, -1.0], [1.0, 0.0]])),
    "tgate": (("pi_left", "zero2_left"), np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2)),
}


class LogicalGate(np.ndarray):
    """
    Unitary on the logical basis |00>, |01>, |10>, |11> (left qubit first).
    """
    def __new__(cls, input_array, name="", check=True):
        """
        Create a new LogicalGate instance, inheriting from numpy.ndarray.

        Parameters:
        - input_array: numpy array, square and unitary to 1e-8.
        - name: str, label used in reports.
        - check: bool, verify unitarity.
        """
        if not isinstance(input_array, np.ndarray):
            raise TypeError("Input must be a numpy array")
        if input_array.ndim != 2 or input_array.shape[0] != input_array.shape[1]:
            raise ValueError("Input must be a square 2D numpy array")
        array = np.asarray(input_array, dtype=complex)
        if check:
            error = float(np.max(np.abs(array.conj().T @ array - np.eye(array.shape[0]))))
            if error > UNITARITY_TOL:
                raise ValueError(f"Logical gate is not unitary (error {error:.2e})")
        obj = array.view(cls)
        obj.name = name
        return obj

    def __array_finalize__(self, obj):
        if obj is None:
            return
        self.name = getattr(obj, 'name', "")

    def then(self, other):
        """Gate applying self first, then other."""
        return LogicalGate(np.asarray(other) @ np.asarray(self), name=f"{self.name};{getattr(other, 'name', '')}")

    def power(self, k):
        return LogicalGate(np.linalg.matrix_power(np.asarray(self), k), name=f"{self.name}^{k}")

    def dagger(self):
        return LogicalGate(np.asarray(self).conj().T, name=f"{self.name}^dag")

    def equivalent(self, other, tol=EQUIVALENCE_TOL):
        return gates_equivalent(self, other, tol)

    def to_dict(self):
        array = np.asarray(self)
        return {"name": self.name, "real": np.round(array.real, 12).tolist(), "imag": np.round(array.imag, 12).tolist()}


def global_phase_distance(U, V):
    """
    min over phi of max|U - exp(i phi) V|, with phi taken from the overlap tr(V^dag U).
    """
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape != V.shape:
        raise ValueError("Gates of different dimension")
    overlap = np.trace(V.conj().T @ U)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-12 else 1.0
    return float(np.max(np.abs(U - phase * V)))


def gates_equivalent(U, V, tol=EQUIVALENCE_TOL):
    """True when U and V agree up to a global phase."""
    return global_phase_distance(U, V) <= tol


def on_qubit(matrix, qubit):
    """Embed a single-qubit matrix on the left ("L") or right ("R") logical qubit."""
    if qubit in ("L", "left"):
        return np.kron(matrix, IDENTITY2)
    if qubit in ("R", "right"):
        return np.kron(IDENTITY2, matrix)
    raise InvalidParameters(f"qubit must be 'L' or 'R', got {qubit!r}")


def reference_gate(name, side="left", edge=None):
    """
    Logical matrix of one of the Majorana-pair gates P, Z, V, X, T on one edge.

    Returns:
    - LogicalGate instance.
    """
    if name not in REFERENCE_GATES:
        raise InvalidParameters(f"Unknown reference gate {name!r}. Choose from {tuple(REFERENCE_GATES)}.")
    if side not in ("left", "right"):
        raise InvalidParameters(f"side must be 'left' or 'right', got {side!r}")
    edge = edge or EdgeFockSpace()
    a, b, theta = REFERENCE_GATES[name][side]
    return LogicalGate(edge.logical_matrix(edge.pair_exp(theta, a, b)), name=f"{name}_{side}")


def ideal_transport(protocol, side="left"):
    """
    Exact net transport of a builtin protocol.

    Returns:
    - active mode names and the 2x2 block.
    """
    if protocol not in LEFT_TRANSPORTS:
        raise InvalidParameters(f"Unknown protocol {protocol!r}. Choose from {tuple(LEFT_TRANSPORTS)}.")
    active, block = LEFT_TRANSPORTS[protocol]
    if side == "left":
        return active, block.copy()
    if side == "right":
        return mirror_transport(active, block)
    raise InvalidParameters(f"side must be 'left' or 'right', got {side!r}")


def lift_transport(active_modes, block, name="", edge=None):
    """
    Logical gate of a rotation of two edge Majoranas.

    Parameters:
    - active_modes: names of the two exchanged modes.
    - block: 2x2 transport, orthogonalized by polar decomposition.
    - name: label of the gate.

    Returns:
    - LogicalGate instance.
    """
    edge = edge or EdgeFockSpace()
    rotation, _ = polar(np.asarray(block, dtype=float))
    W = edge.rotation_from_transport(active_modes, rotation)
    return LogicalGate(edge.logical_matrix(W), name=name)


def gate_from_braid(report, edge=None, tol=BRAID_LEAKAGE_TOL):
    """
    Logical gate realized by a measured braid.

    Parameters:
    - report: BraidReport from protocols.braid_matrix.
    - tol: float, largest tolerated off-block weight.

    Returns:
    - LogicalGate instance.
    """
    if report.leakage > tol:
        raise LeakageTooLarge(f"Braid {report.schedule_name} leaks {report.leakage:.2e} out of its active pair")
    gate = lift_transport(report.active_modes, report.block, name=report.schedule_name, edge=edge)
    logger.debug("Lifted %s to a logical gate", report.schedule_name)
    return gate


def ideal_gate(protocol, side="left", edge=None):
    """Logical gate of the exact transport of a builtin protocol."""
    active, block = ideal_transport(protocol, side)
    return lift_transport(active, block, name=f"{protocol}_{side}", edge=edge)
