from .covariance_state import CovarianceState, total_parity, save_state, load_state
from .measurement import MeasurementRecord, measure_parity, parity_probability, make_rng, spawn_rngs
from .states import (
    LOGICAL_LABELS, normalize_label, edge_pairing, init_logical, evolve_state, correlation,
    pair_rotation, rotate_pair, prepare_ancilla,
)

__all__ = [
    "CovarianceState", "total_parity", "save_state", "load_state",
    "MeasurementRecord", "measure_parity", "parity_probability", "make_rng", "spawn_rngs",
    "LOGICAL_LABELS", "normalize_label", "edge_pairing", "init_logical", "evolve_state", "correlation",
    "pair_rotation", "rotate_pair", "prepare_ancilla",
]
