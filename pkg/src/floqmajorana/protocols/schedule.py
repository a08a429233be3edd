import logging
import math
from dataclasses import dataclass, field
from typing import Callable

from ..exceptions import ClosureViolation, InvalidParameters, OddDuration

logger = logging.getLogger(__name__)

EVERY_PERIOD = "every_period"
EVERY_OTHER_PERIOD = "every_other_period"
CADENCES = (EVERY_PERIOD, EVERY_OTHER_PERIOD)
CLOSURE_TOL = 1e-12
ENTRY_STEP = "enter"
EXIT_STEP = "exit"


@dataclass(frozen=True)
class PeriodInfo:
    """Parameters in force during one driving period."""
    period: int
    step_index: int
    step_name: str
    u: float
    cadence: str
    params: object


@dataclass(frozen=True)
class ScheduleStep:
    """
    One adiabatic step: a curve u in [0, 1] -> DriveParams run over `duration` periods.

    Parameters are updated stroboscopically at the start of each period (u = m/M for
    period m = 1..M), or every other period (u = p/(M/2) for the pair p = ceil(m/2)).
    """
    name: str
    duration: int
    curve: Callable = field(compare=False)
    cadence: str = EVERY_PERIOD

    def __post_init__(self):
        if self.duration < 2 or self.duration % 2:
            raise OddDuration(f"Step {self.name!r} needs an even duration of at least 2 periods, got {self.duration}")
        if self.cadence not in CADENCES:
            raise InvalidParameters(f"Invalid cadence {self.cadence!r}. Choose from {CADENCES}.")

    def progress(self, m):
        """Adiabatic progress u used in period m (1-based) of this step."""
        if self.cadence == EVERY_PERIOD:
            return m / self.duration
        return math.ceil(m / 2) / (self.duration // 2)

    def sample_points(self):
        """Distinct u values visited by the step, in order."""
        count = self.duration if self.cadence == EVERY_PERIOD else self.duration // 2
        return [k / count for k in range(1, count + 1)]


class Schedule:
    """
    Ordered list of ScheduleSteps acting on one base parameter set.
    """
    def __init__(self, name, steps, base_params, active_modes=(), options=None):
        """
        Parameters:
        - name: str.
        - steps: list of ScheduleStep.
        - base_params: DriveParams the schedule starts from.
        - active_modes: names of the two edge modes the protocol exchanges.
        - options: dict of the options the schedule was built with (for serialization).
        """
        if not steps:
            raise InvalidParameters("A schedule needs at least one step")
        self.name = name
        self.steps = list(steps)
        self.base_params = base_params
        self.active_modes = tuple(active_modes)
        self.options = dict(options or {})

    @classmethod
    def frozen(cls, params, duration):
        """Single step holding params fixed."""
        return cls("frozen", [ScheduleStep("frozen", duration, lambda u: params)], params)

    @property
    def total_periods(self):
        return sum(step.duration for step in self.steps)

    @property
    def start_params(self):
        return self.steps[0].curve(0.0)

    @property
    def end_params(self):
        return self.steps[-1].curve(1.0)

    def closure_error(self):
        """Largest parameter difference between the end and the start of the schedule."""
        return self.end_params.max_deviation(self.start_params)

    @property
    def lead_in(self):
        """Leading "enter" steps that carry the base onto the working point of the protocol."""
        steps = []
        for step in self.steps:
            if step.name != ENTRY_STEP:
                break
            steps.append(step)
        return steps

    @property
    def closed(self):
        return self.closure_error() <= CLOSURE_TOL

    def require_closed(self):
        error = self.closure_error()
        if error > CLOSURE_TOL:
            raise ClosureViolation(f"Schedule {self.name!r} does not return to its start (deviation {error:.3e})")

    def select(self, step_names, name=None):
        """
        Schedule made of a subset of steps, in the given order.

        Parameters:
        - step_names: iterable of step names or 1-based step numbers.
        - name: optional name of the new schedule.

        Returns:
        - Schedule instance.
        """
        chosen = []
        for key in step_names:
            if isinstance(key, int):
                if not 1 <= key <= len(self.steps):
                    raise InvalidParameters(f"Step {key} outside 1..{len(self.steps)}")
                chosen.append(self.steps[key - 1])
            else:
                matches = [step for step in self.steps if step.name == key]
                if not matches:
                    raise InvalidParameters(f"Schedule {self.name!r} has no step {key!r}")
                chosen.append(matches[0])
        return Schedule(name or f"{self.name}[{','.join(str(key) for key in step_names)}]", chosen,
                        self.base_params, self.active_modes, self.options)

    def periods(self):
        """
        Iterate over every driving period.

        Yields:
        - PeriodInfo with the parameters of that period; consecutive periods sharing one u
          share the same DriveParams object.
        """
        period = 0
        for step_index, step in enumerate(self.steps):
            cache = {}
            for m in range(1, step.duration + 1):
                period += 1
                u = step.progress(m)
                if u not in cache:
                    cache = {u: step.curve(u)}
                yield PeriodInfo(period, step_index, step.name, u, step.cadence, cache[u])

    def to_dict(self):
        return {
            "name": self.name,
            "options": self.options,
            "steps": [{"name": step.name, "duration": step.duration, "cadence": step.cadence} for step in self.steps],
        }

    def __repr__(self):
        return f"Schedule({self.name!r}, steps={[step.name for step in self.steps]}, periods={self.total_periods})"
