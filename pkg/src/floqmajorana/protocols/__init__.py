from .schedule import Schedule, ScheduleStep, PeriodInfo, EVERY_PERIOD, EVERY_OTHER_PERIOD, ENTRY_STEP, EXIT_STEP
from .generic_protocol import GenericProtocol, EDGE_PATCH, blend_params, displaced_params, ideal_patch, mirror_override
from .braiding_protocols import (
    BraidAProtocol, BraidBProtocol, TGateProtocol, ReadoutRampProtocol,
    BUILTIN_SCHEDULES, builtin_schedule, schedule_from_dict,
)
from .stroboscopic import Trajectory, BraidReport, run, braid_matrix, period_propagators, start_modes
from .holonomy import HolonomyResult, wilson_holonomy, monodromy_distance

__all__ = [
    "Schedule", "ScheduleStep", "PeriodInfo", "EVERY_PERIOD", "EVERY_OTHER_PERIOD", "ENTRY_STEP", "EXIT_STEP",
    "GenericProtocol", "EDGE_PATCH", "blend_params", "displaced_params", "ideal_patch", "mirror_override",
    "BraidAProtocol", "BraidBProtocol", "TGateProtocol", "ReadoutRampProtocol",
    "BUILTIN_SCHEDULES", "builtin_schedule", "schedule_from_dict",
    "Trajectory", "BraidReport", "run", "braid_matrix", "period_propagators", "start_modes",
    "HolonomyResult", "wilson_holonomy", "monodromy_distance",
]
