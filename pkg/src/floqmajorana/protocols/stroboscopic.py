import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..evolve import (
    MODE_NAMES, EdgeModeSet, adiabaticity_metrics, edge_modes, floquet_propagator, pinned_splittings,
    pinned_subspaces,
)
from ..exceptions import InvalidParameters, LeakageTooLarge
from ..gaussian import CovarianceState, evolve_state, init_logical
from .schedule import EVERY_OTHER_PERIOD, Schedule

logger = logging.getLogger(__name__)

LEAKAGE_TOL = 1e-2


def period_propagators(schedule, progress=True):
    """
    One-period propagators along a schedule.

    Yields:
    - (PeriodInfo, OrthogonalPropagator); the propagator is rebuilt only when the
      parameters change.
    """
    if not isinstance(schedule, Schedule):
        raise TypeError("schedule must be a Schedule instance")
    last_params = None
    O = None
    current_step = None
    for info in tqdm(schedule.periods(), total=schedule.total_periods, desc=schedule.name, disable=not progress):
        if info.step_index != current_step:
            if current_step is not None:
                logger.info("Finished %s of %s", schedule.steps[current_step].name, schedule.name)
            current_step = info.step_index
        if info.params is not last_params:
            O = floquet_propagator(info.params)
            last_params = info.params
        yield info, O
    logger.info("Finished %s of %s", schedule.steps[-1].name, schedule.name)


def start_modes(schedule, progress=False):
    """
    Gauge-fixed edge modes at the start of a schedule.

    For a schedule that opens with "enter" steps, the edge modes of the fine-tuned working
    point are carried back through those steps and serve as the alignment reference, so the
    modes at an off-ideal start are the ones the entry ramp turns into the closed-form modes.

    Parameters:
    - schedule: Schedule.
    - progress: bool.

    Returns:
    - EdgeModeSet instance.
    """
    start = schedule.start_params
    O_start = floquet_propagator(start)
    lead_in = schedule.lead_in
    if not lead_in:
        return edge_modes(O_start, N=start.N, wires=start.wires)

    entry = Schedule(f"{schedule.name}[enter]", lead_in, start)
    core = entry.end_params
    vectors = np.asarray(edge_modes(floquet_propagator(core), N=core.N, wires=core.wires))
    infos = list(entry.periods())
    last_params = None
    O = None
    for info in tqdm(reversed(infos), total=len(infos), desc=entry.name, disable=not progress):
        if info.params is not last_params:
            O = np.asarray(floquet_propagator(info.params))
            last_params = info.params
        vectors = O.T @ vectors
    reference = EdgeModeSet(vectors)
    logger.debug("Carried the working-point edge modes of %s back over %d periods", schedule.name, len(infos))
    return edge_modes(O_start, reference=reference, N=start.N, wires=start.wires)


def _pair_labels(names):
    return [(a, b) for i, a in enumerate(names) for b in names[i + 1:]]


class Trajectory:
    """
    Record of a stroboscopic run: per-period probe correlations and pinning deviations,
    the final covariance state, the transported probe vectors and adiabaticity metrics.
    """
    def __init__(self, schedule_name, rows, final_state, transported, metrics, probe_names=MODE_NAMES):
        self.schedule_name = schedule_name
        self.rows = rows
        self.final_state = final_state
        self.transported = transported
        self.metrics = metrics
        self.probe_names = tuple(probe_names)

    @property
    def frame(self):
        return pd.DataFrame(self.rows)

    @property
    def correlation_columns(self):
        return [f"{a}|{b}" for a, b in _pair_labels(self.probe_names)]

    def correlation(self, a, b, period=-1):
        """<i gamma_a gamma_b> between two initial probe vectors at a recorded period."""
        key = f"{a}|{b}"
        sign = 1.0
        if key not in self.rows[0]:
            key, sign = f"{b}|{a}", -1.0
        if key not in self.rows[0]:
            raise InvalidParameters(f"No recorded correlation between {a!r} and {b!r}")
        return sign * self.rows[period][key]

    def max_correlation_magnitude(self):
        return float(self.frame[self.correlation_columns].abs().to_numpy().max())

    def to_csv(self, path):
        self.frame.to_csv(path, index=False, float_format="%.12g")
        logger.info("Wrote trajectory of %s to %s", self.schedule_name, path)


def run(schedule, state=None, probes=None, record_spectrum=True, progress=True):
    """
    Drive a schedule period by period.

    Parameters:
    - schedule: Schedule.
    - state: CovarianceState; defaults to the "+" logical state of the start parameters.
    - probes: EdgeModeSet of fixed probe vectors; defaults to start_modes(schedule).
    - record_spectrum: bool, record one- or two-period pinning deviations per period.
    - progress: bool, show a tqdm bar.

    Returns:
    - Trajectory instance.
    """
    start = schedule.start_params
    O_start = floquet_propagator(start)
    if probes is None:
        probes = start_modes(schedule)
    if not isinstance(probes, EdgeModeSet):
        raise TypeError("probes must be an EdgeModeSet")
    if state is None:
        state = init_logical("+", probes, O_start)
    if not isinstance(state, CovarianceState):
        raise TypeError("state must be a CovarianceState")
    if state.shape[0] != start.n_majoranas or probes.shape[0] != start.n_majoranas:
        raise ValueError(f"State and probes must have dimension {start.n_majoranas}")

    P = np.asarray(probes)
    vectors = P.copy()
    pairs = [(MODE_NAMES.index(a), MODE_NAMES.index(b), f"{a}|{b}") for a, b in _pair_labels(MODE_NAMES)]
    rows = []
    splittings = []
    last_O = None
    split = (np.nan, np.nan)
    for info, O in period_propagators(schedule, progress=progress):
        state = evolve_state(state, O)
        vectors = np.asarray(O) @ vectors
        if record_spectrum and O is not last_O:
            periods = 2 if info.cadence == EVERY_OTHER_PERIOD else 1
            split = pinned_splittings(O, periods=periods)
            splittings.extend(split)
        last_O = O

        C = P.T @ np.asarray(state) @ P
        row = {"period": info.period, "step": info.step_name, "u": info.u}
        for i, j, key in pairs:
            row[key] = float(C[i, j])
        row["max_zero_splitting"] = split[0]
        row["max_pi_splitting"] = split[1]
        rows.append(row)

    end = schedule.end_params
    block = slice(4 * end.N * probes.wire, 4 * end.N * (probes.wire + 1))
    zero_basis, pi_basis, splitting = pinned_subspaces(np.asarray(floquet_propagator(end))[block, block], 4, 2)
    final_span = np.zeros_like(P)
    final_span[block] = np.hstack([zero_basis, pi_basis])
    final_modes = EdgeModeSet(final_span, wire=probes.wire, splitting=splitting)
    metrics = adiabaticity_metrics(final_modes, vectors, splittings)
    logger.info(
        "Ran %s over %d periods: diabatic error %.3e, max splitting %.3e",
        schedule.name, len(rows), metrics["diabatic_error"], metrics["max_splitting"],
    )
    transported = EdgeModeSet(vectors, wire=probes.wire)
    return Trajectory(schedule.name, rows, state, transported, metrics)


@dataclass
class BraidReport:
    """
    Projection of the transported edge modes onto the initial ones.

    full[i, j] is the weight of initial mode i in the image of mode j, so the active
    block of braidA on the left edge reads [[0, 1], [-1, 0]] (zero1 -> -zero2).
    """
    schedule_name: str
    active_modes: Tuple[str, str]
    full: np.ndarray
    block: np.ndarray
    leakage: float
    captured: np.ndarray
    metadata: Dict = field(default_factory=dict)

    def block_power(self, k):
        return np.linalg.matrix_power(self.block, k)

    def to_dict(self):
        return {
            "schedule": self.schedule_name,
            "active_modes": list(self.active_modes),
            "block": np.round(self.block, 12).tolist(),
            "full": np.round(self.full, 12).tolist(),
            "leakage": self.leakage,
        }


def braid_matrix(schedule, params0=None, tol=LEAKAGE_TOL, progress=True):
    """
    Evolve the six edge-mode vectors through a closed schedule and project them back.

    Parameters:
    - schedule: closed Schedule with active_modes set.
    - params0: optional DriveParams, checked against the schedule start where the edge modes
      are extracted (see start_modes).
    - tol: float, largest tolerated off-block weight.
    - progress: bool.

    Returns:
    - BraidReport instance.
    """
    schedule.require_closed()
    if len(schedule.active_modes) != 2:
        raise InvalidParameters(f"Schedule {schedule.name!r} does not name two active modes")
    if params0 is not None and params0.max_deviation(schedule.start_params) > 1e-12:
        raise InvalidParameters("params0 differs from the start of the schedule")

    modes = start_modes(schedule, progress=progress)
    E = np.asarray(modes)
    vectors = E.copy()
    for _, O in period_propagators(schedule, progress=progress):
        vectors = np.asarray(O) @ vectors

    R = E.T @ vectors
    active = [MODE_NAMES.index(name) for name in schedule.active_modes]
    others = [k for k in range(len(MODE_NAMES)) if k not in active]
    block = R[np.ix_(active, active)]
    captured = np.sum(R ** 2, axis=0)
    leakage = max(
        float(np.max(R[np.ix_(others, active)] ** 2)),
        float(np.max(R[np.ix_(active, others)] ** 2)),
        float(np.max(np.abs(R[np.ix_(others, others)] - np.eye(len(others))))),
        float(np.max(1 - captured)),
    )
    report = BraidReport(schedule.name, schedule.active_modes, R, block, leakage, captured)
    logger.info("Braid %s: block %s, leakage %.2e", schedule.name, np.round(block, 4).tolist(), leakage)
    if leakage > tol:
        raise LeakageTooLarge(f"Off-block weight {leakage:.3e} of {schedule.name} exceeds {tol:.1e}")
    return report
