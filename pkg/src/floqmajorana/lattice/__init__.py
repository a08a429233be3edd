from .majorana_index import MajoranaIndex, majorana_index, fermion_mode
from .drive_params import DriveParams, FIELDS, SEGMENT1_FIELDS, SEGMENT2_FIELDS, IDEAL_UNIFORM, OFF_IDEAL_UNIFORM
from .quadratic_hamiltonian import QuadraticHamiltonian, build_segment, build_break_term, mirror_majorana

__all__ = [
    "MajoranaIndex", "majorana_index", "fermion_mode",
    "DriveParams", "FIELDS", "SEGMENT1_FIELDS", "SEGMENT2_FIELDS", "IDEAL_UNIFORM", "OFF_IDEAL_UNIFORM",
    "QuadraticHamiltonian", "build_segment", "build_break_term", "mirror_majorana",
]
