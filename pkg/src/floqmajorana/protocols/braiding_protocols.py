import logging

import numpy as np

from ..exceptions import InvalidParameters, UnknownSchedule
from .generic_protocol import F_SHAPES, GenericProtocol
from .schedule import EVERY_OTHER_PERIOD, EVERY_PERIOD

logger = logging.getLogger(__name__)

PI = np.pi


class BraidAProtocol(GenericProtocol):
    """
    Six-step exchange of the two zero modes at one edge.

    Net transport: zero1 -> -zero2 and zero2 -> zero1 on the left edge.
    """
    name = "braidA"
    reach = 1

    @property
    def active_modes(self):
        if self.side == "left":
            return ("zero1_left", "zero2_left")
        return ("zero2_right", "zero1_right")

    def _validate(self):
        if self.params.N < 3:
            raise InvalidParameters("braidA needs at least 3 sites")

    def _build_steps(self):
        def cs(u):
            phi = self.phi(u)
            return np.cos(phi), np.sin(phi)

        def step1(u):
            c, s = cs(u)
            return {
                ("j_inter", 1): PI * (1 + c),
                ("delta_inter", 1): -PI * (1 - c),
                ("j_intra", 1): PI * s,
                ("delta_intra", 1): PI * s,
            }

        def step2(u):
            c, s = cs(u)
            return {
                ("j_inter", 1): PI * c,
                ("delta_inter", 1): -PI * c,
                ("j_intra", 1): PI * (1 + s),
                ("delta_intra", 1): PI * (1 - s),
                ("J_intra", 1): PI / 2 * (1 - s),
                ("Delta_intra", 1): PI / 2 * (1 + s),
                ("J_inter", 1): PI / 2 * c,
                ("Delta_inter", 1): PI / 2 * c,
            }

        def step3(u):
            c, s = cs(u)
            return {
                ("j_intra", 1): PI * (1 + c),
                ("delta_intra", 1): PI * (1 - c),
                ("j_inter", 1): -1j * PI * s,
                ("delta_inter", 1): 1j * PI * s,
            }

        def step4(u):
            c, _ = cs(u)
            return {
                ("J_intra", 1): PI / 2 * (1 - c),
                ("Delta_intra", 1): PI / 2 * (1 + c),
            }

        def step5(u):
            _, s = cs(u)
            hopping = -PI * np.exp(1j * (PI / 2 + self.phi(u)))
            return {
                ("j_inter", 1): hopping,
                ("delta_inter", 1): -hopping,
                ("J_inter", 1): PI / 2 * s,
                ("Delta_inter", 1): PI / 2 * s,
            }

        def step6(u):
            c, s = cs(u)
            return {
                ("j_intra", 1): PI * c,
                ("delta_intra", 1): PI * c,
                ("j_inter", 1): PI * (1 + s),
                ("delta_inter", 1): -PI * (1 - s),
            }

        moves = (step1, step2, step3, step4, step5, step6)
        return [(f"step{k}", EVERY_PERIOD, move) for k, move in enumerate(moves, start=1)]


class BraidBProtocol(GenericProtocol):
    """
    Seven-step exchange of the pi mode with the second zero mode at one edge.

    The pi mode is carried to site n and back by a bias on A_{n+1}; steps 3 and 6
    update their parameters every other period.
    """
    name = "braidB"
    steps_used = (1, 2, 3, 4, 5, 6, 7)

    def __init__(self, params, side="left", M=400, ramp="linear", n=4, f="cos"):
        """
        Parameters:
        - params: DriveParams the protocol starts and ends at.
        - side: "left" or "right" edge.
        - M: int, even number of driving periods per step.
        - ramp: "linear" or "smoothstep".
        - n: int >= 2, site the pi mode is moved to.
        - f: "cos" (f = cos(s pi) with s from 1 to 0) or "linear"; the ramp of steps 3 and 6.
        """
        super().__init__(params, side=side, M=M, ramp=ramp)
        self.n = n
        self.f = f

    @property
    def active_modes(self):
        if self.side == "left":
            return ("pi_left", "zero2_left")
        return ("pi_right", "zero1_right")

    @property
    def reach(self):
        return int(self.n) + 1

    def options(self):
        return {**super().options(), "n": self.n, "f": self.f}

    def f_value(self, u):
        """Monotone ramp from -1 to 1."""
        if self.f == "cos":
            return -np.cos(PI * u)
        return 2 * u - 1

    def _validate(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParameters(f"n must be an integer >= 2, got {self.n!r}")
        if self.f not in F_SHAPES:
            raise InvalidParameters(f"Invalid f shape {self.f!r}. Choose from {F_SHAPES}.")
        if 2 * (self.n + 1) > self.params.N:
            raise InvalidParameters(f"n = {self.n} needs N >= {2 * (self.n + 1)}, got {self.params.N}")

    def _build_steps(self):
        n = int(self.n)

        def cs(u):
            phi = self.phi(u)
            return np.cos(phi), np.sin(phi)

        def dimerize(sites, c, s):
            values = {}
            for k in sites:
                values[("j_inter", k)] = PI * (1 + c)
                values[("delta_inter", k)] = -PI * (1 - c)
                values[("j_intra", k)] = PI * s
                values[("delta_intra", k)] = PI * s
            return values

        def step1(u):
            return dimerize(range(1, n + 1), *cs(u))

        def step2(u):
            c, s = cs(u)
            return {
                ("bias_a", n + 1): 2 * PI * s,
                ("j_inter", n): PI * c,
                ("delta_inter", n): -PI * c,
            }

        def step3(u):
            f = self.f_value(u)
            return {
                ("bias_a", n + 1): PI * (1 - f),
                ("j_intra", n): PI / 2 * (1 - f),
                ("delta_intra", n): PI / 2 * (1 - f),
                ("j_inter", n): PI * (1 + f),
                ("delta_inter", n): 0.0,
            }

        def step4(u):
            return dimerize([n], *cs(u))

        def step7(u):
            c, s = cs(u)
            # Same dimerization as step 1 run backwards with phi -> pi/2 - phi
            return dimerize(range(1, n), s, c)

        steps = {
            1: ("step1", EVERY_PERIOD, step1),
            2: ("step2", EVERY_PERIOD, step2),
            3: ("step3", EVERY_OTHER_PERIOD, step3),
            4: ("step4", EVERY_PERIOD, step4),
            5: ("step5", EVERY_PERIOD, step2),
            6: ("step6", EVERY_OTHER_PERIOD, step3),
            7: ("step7", EVERY_PERIOD, step7),
        }
        return [steps[k] for k in self.steps_used]


class TGateProtocol(BraidBProtocol):
    """
    Half of braidB: steps 1-3 followed by the closing step 7, a pi/4 exchange.
    """
    name = "tgate"
    steps_used = (1, 2, 3, 7)


class ReadoutRampProtocol(GenericProtocol):
    """
    Switch the chiral-symmetry-breaking potentials on and off again.
    """
    name = "readout"

    def __init__(self, params, M=400, ramp="linear", mu1=0.1, mu2=0.05):
        super().__init__(params, side="left", M=M, ramp=ramp)
        self.mu1 = mu1
        self.mu2 = mu2

    @property
    def full_name(self):
        return self.name

    def options(self):
        return {"M": self.M, "ramp": self.ramp, "mu1": self.mu1, "mu2": self.mu2}

    def _build_steps(self):
        def level(u):
            return np.sin(self.phi(u))

        def ramp_on(u):
            return {("mu1", None): self.mu1 * level(u), ("mu2", None): self.mu2 * level(u)}

        def ramp_off(u):
            return {("mu1", None): self.mu1 * level(1 - u), ("mu2", None): self.mu2 * level(1 - u)}

        return [("ramp_on", EVERY_PERIOD, ramp_on), ("ramp_off", EVERY_PERIOD, ramp_off)]


BUILTIN_PROTOCOLS = {
    "braidA": BraidAProtocol,
    "braidB": BraidBProtocol,
    "tgate": TGateProtocol,
}
BUILTIN_SCHEDULES = tuple(
    f"{protocol}_{side}" for protocol in BUILTIN_PROTOCOLS for side in ("left", "right")
) + ("readout",)


def builtin_schedule(name, params, M=400, n=4, f="cos", ramp="linear", mu1=0.1, mu2=0.05):
    """
    Build one of the named protocol schedules around a base parameter set.

    Parameters:
    - name: one of BUILTIN_SCHEDULES.
    - params: DriveParams the schedule starts and ends at.
    - M: int, even number of periods per step.
    - n: int, braidB/tgate site offset.
    - f: "cos" or "linear", braidB/tgate ramp of the every-other-period steps.
    - ramp: "linear" or "smoothstep" angle ramp.
    - mu1, mu2: readout ramp targets.

    Returns:
    - Schedule instance.
    """
    if name == "readout":
        return ReadoutRampProtocol(params, M=M, ramp=ramp, mu1=mu1, mu2=mu2).build()
    protocol, _, side = name.rpartition("_")
    if name not in BUILTIN_SCHEDULES:
        raise UnknownSchedule(f"Unknown schedule {name!r}. Choose from {BUILTIN_SCHEDULES}.")
    cls = BUILTIN_PROTOCOLS[protocol]
    if cls is BraidAProtocol:
        return cls(params, side=side, M=M, ramp=ramp).build()
    return cls(params, side=side, M=M, ramp=ramp, n=n, f=f).build()


def schedule_from_dict(data, params):
    """
    Rebuild a builtin schedule from Schedule.to_dict() output.

    Parameters:
    - data: dict with "name" and "options".
    - params: DriveParams the schedule acts on.

    Returns:
    - Schedule instance.
    """
    options = dict(data.get("options", {}))
    name = data["name"]
    base_name = name.split("[", 1)[0]
    options.pop("side", None)
    schedule = builtin_schedule(base_name, params, **options)
    if "[" in name:
        selected = [step["name"] for step in data["steps"]]
        schedule = schedule.select(selected, name=name)
    return schedule
