from .propagator import OrthogonalPropagator, propagate, segment_propagators, floquet_propagator
from .spectrum import SpectrumReport, spectrum, spectrum_scan, eigenphases, pinned_splittings, PINNING_TOL, DEFAULT_N_LOC
from .edge_modes import (
    EdgeModeSet, ModeVector, MODE_NAMES, ZERO_MODES, PI_MODES,
    edge_modes, ideal_edge_modes, pinned_subspaces, adiabaticity_metrics,
)

__all__ = [
    "OrthogonalPropagator", "propagate", "segment_propagators", "floquet_propagator",
    "SpectrumReport", "spectrum", "spectrum_scan", "eigenphases", "pinned_splittings", "PINNING_TOL", "DEFAULT_N_LOC",
    "EdgeModeSet", "ModeVector", "MODE_NAMES", "ZERO_MODES", "PI_MODES",
    "edge_modes", "ideal_edge_modes", "pinned_subspaces", "adiabaticity_metrics",
]
