from ._version import __version__
from .exceptions import FloquetMajoranaError, InvalidInputError, NumericalContractError
from .lattice import DriveParams, MajoranaIndex, majorana_index
from .evolve import OrthogonalPropagator, EdgeModeSet, floquet_propagator, spectrum, edge_modes
from .topology import winding_invariants, phase_diagram, symmetry_check
from .gaussian import CovarianceState, init_logical, evolve_state, measure_parity
from .protocols import Schedule, builtin_schedule, run, braid_matrix, wilson_holonomy
from .logic import LogicalGate, gate_from_braid, readout, run_algorithm, cnot_two_wire
from .fockoracle import FockSpace, FockState, oracle_propagator, oracle_covariance, validate_against_oracle
from .config import RunConfig, configure_logging

__all__ = [
    "__version__",
    "FloquetMajoranaError", "InvalidInputError", "NumericalContractError",
    "DriveParams", "MajoranaIndex", "majorana_index",
    "OrthogonalPropagator", "EdgeModeSet", "floquet_propagator", "spectrum", "edge_modes",
    "winding_invariants", "phase_diagram", "symmetry_check",
    "CovarianceState", "init_logical", "evolve_state", "measure_parity",
    "Schedule", "builtin_schedule", "run", "braid_matrix", "wilson_holonomy",
    "LogicalGate", "gate_from_braid", "readout", "run_algorithm", "cnot_two_wire",
    "FockSpace", "FockState", "oracle_propagator", "oracle_covariance", "validate_against_oracle",
    "RunConfig", "configure_logging",
]
