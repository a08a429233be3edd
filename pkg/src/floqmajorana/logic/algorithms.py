import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..evolve import MODE_NAMES, EdgeModeSet, floquet_propagator
from ..exceptions import InvalidParameters, UnsupportedWidth
from ..gaussian import init_logical, make_rng
from ..lattice import DriveParams
from ..protocols import builtin_schedule, run, start_modes
from .edge_fock import LOGICAL_BASIS
from .gates import LogicalGate, ideal_gate
from .readout import measure_logical

logger = logging.getLogger(__name__)

ALGORITHMS = ("search", "deutsch_jozsa")
BACKENDS = ("logical_matrix", "gaussian_trajectory")
DEFAULT_N = 40


@dataclass
class AlgorithmResult:
    """Outcome of one two-qubit algorithm run."""
    name: str
    input: object
    backend: str
    outcome: str
    classification: Optional[str] = None
    gates: List[str] = field(default_factory=list)
    metrics: Dict[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "input": self.input,
            "backend": self.backend,
            "outcome": self.outcome,
            "classification": self.classification,
            "gates": self.gates,
            "metrics": self.metrics,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _bits(value):
    """
    Two oracle bits (left, right) from an int 0..3 or a two-character bit string.

    An integer z = z_L + 2 z_R carries the left qubit in its low bit; a string is read left to right.
    """
    if isinstance(value, str):
        if len(value) != 2 or set(value) - {"0", "1"}:
            raise InvalidParameters(f"Expected a two-bit string, got {value!r}")
        return int(value[0]), int(value[1])
    if int(value) != value or not 0 <= value <= 3:
        raise InvalidParameters(f"Expected an integer 0..3, got {value!r}")
    return int(value) & 1, int(value) >> 1


def oracle_bits(name, value):
    """
    Bits z_L, z_R of the phase oracle Z_L^z_L Z_R^z_R.

    search takes the marked input zbar directly; deutsch_jozsa takes (z, k) for
    f(x) = z.x xor k, whose constant k only contributes a global phase.
    """
    if name == "search":
        return _bits(value)
    if name == "deutsch_jozsa":
        if isinstance(value, (tuple, list)):
            z, k = value
            if k not in (0, 1):
                raise InvalidParameters(f"k must be 0 or 1, got {k!r}")
        else:
            z = value
        return _bits(z)
    raise InvalidParameters(f"Unknown algorithm {name!r}. Choose from {ALGORITHMS}.")


def gate_sequence(bits):
    """
    Protocol names of (HZ x HZ) -> oracle -> (HZ x HZ), in the order applied.

    Each Z of the oracle is a double braidA on its edge; gates on the two edges are applied
    one after the other.
    """
    layer = [("braidB", "left"), ("braidB", "right")]
    oracle = []
    for bit, side in zip(bits, ("left", "right")):
        if bit:
            oracle += [("braidA", side), ("braidA", side)]
    return layer + oracle + layer


def _classify(name, outcome):
    if name != "deutsch_jozsa":
        return None
    return "constant" if outcome == "11" else "balanced"


def _run_logical_matrix(sequence):
    U = LogicalGate(np.eye(4, dtype=complex), name="identity")
    for protocol, side in sequence:
        U = U.then(ideal_gate(protocol, side))
    amplitudes = np.asarray(U)[:, 0]
    probabilities = np.abs(amplitudes) ** 2
    outcome = LOGICAL_BASIS[int(np.argmax(probabilities))]
    return outcome, {"outcome_probability": float(np.max(probabilities))}


def _edge_frame(schedules):
    """Edge modes whose left and right columns follow the gauge of the left and right braids."""
    columns = None
    for key, schedule in schedules.items():
        side = key.rpartition("_")[2]
        modes = np.asarray(start_modes(schedule))
        if columns is None:
            columns = modes.copy()
        picked = [MODE_NAMES.index(name) for name in MODE_NAMES if name.endswith(f"_{side}")]
        columns[:, picked] = modes[:, picked]
    return EdgeModeSet(columns)


def _run_gaussian_trajectory(sequence, params, M, n, rng, progress):
    O = floquet_propagator(params)
    schedules = {}
    for protocol, side in sequence:
        key = f"{protocol}_{side}"
        if key not in schedules:
            schedules[key] = builtin_schedule(key, params, M=M, n=n)
    modes = _edge_frame(schedules)
    state = init_logical("00", modes, O)
    diabatic = 0.0
    for protocol, side in sequence:
        trajectory = run(schedules[f"{protocol}_{side}"], state, modes, record_spectrum=False, progress=progress)
        state = trajectory.final_state
        diabatic = max(diabatic, trajectory.metrics["diabatic_error"])
    outcome, records, _ = measure_logical(state, modes, rng=rng)
    probability = float(np.prod([record.probability for record in records]))
    return outcome, {"diabatic_error": diabatic, "outcome_probability": probability}


def run_algorithm(name, input, backend="logical_matrix", width=2, params=None, M=400, n=4, rng=None, progress=False):
    """
    Run the two-qubit search or Deutsch-Jozsa circuit on one wire.

    Parameters:
    - name: "search" or "deutsch_jozsa".
    - input: search: marked value 0..3 (or "01"-style string); deutsch_jozsa: (z, k) or z.
    - backend: "logical_matrix" (gate composition) or "gaussian_trajectory" (braid schedules
      on a covariance state followed by parity readout).
    - width: number of logical qubits; only 2 is supported.
    - params: DriveParams for the gaussian backend (default ideal chain of 40 sites).
    - M, n: schedule options for the gaussian backend.
    - rng: seed or Generator for the readout.
    - progress: bool.

    Returns:
    - AlgorithmResult instance.
    """
    if width != 2:
        raise UnsupportedWidth(f"Algorithms run on the two logical qubits of one wire, got width {width}")
    if backend not in BACKENDS:
        raise InvalidParameters(f"Unknown backend {backend!r}. Choose from {BACKENDS}.")
    bits = oracle_bits(name, input)
    sequence = gate_sequence(bits)

    if backend == "logical_matrix":
        outcome, metrics = _run_logical_matrix(sequence)
    else:
        params = params or DriveParams.ideal(DEFAULT_N)
        if params.wires != 1:
            raise UnsupportedWidth("Algorithms run on a single wire")
        outcome, metrics = _run_gaussian_trajectory(sequence, params, M, n, make_rng(rng), progress)

    result = AlgorithmResult(
        name=name,
        input=list(input) if isinstance(input, tuple) else input,
        backend=backend,
        outcome=outcome,
        classification=_classify(name, outcome),
        gates=[f"{protocol}_{side}" for protocol, side in sequence],
        metrics=metrics,
    )
    logger.info("%s(%s) on %s -> |%s>", name, input, backend, outcome)
    return result
