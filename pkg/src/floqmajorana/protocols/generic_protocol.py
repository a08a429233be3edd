import logging

import numpy as np

from ..exceptions import InvalidParameters, OddDuration
from ..lattice import FIELDS, DriveParams
from .schedule import ENTRY_STEP, EXIT_STEP, Schedule, ScheduleStep

logger = logging.getLogger(__name__)

SIDES = ("left", "right")
RAMPS = ("linear", "smoothstep")
F_SHAPES = ("cos", "linear")
SITE_FIELDS = FIELDS + ("bias_a", "bias_b")
# Edge sites set to the fine-tuned values before an off-ideal braid
EDGE_PATCH = 8

# Rest values of every overridable quantity at the fine-tuned point
IDEAL_FIELD_VALUES = {
    "J_intra": np.pi / 2,
    "J_inter": np.pi / 2,
    "Delta_intra": np.pi / 2,
    "Delta_inter": np.pi / 2,
    "j_intra": 0.0,
    "j_inter": 2 * np.pi,
    "delta_intra": 0.0,
    "delta_inter": 0.0,
    "bias_a": 0.0,
    "bias_b": 0.0,
    "mu1": 0.0,
    "mu2": 0.0,
}


def mirror_override(name, site, value, N):
    """
    Image of one left-edge override under the chain reflection i -> N+1-i.

    Intra-cell entries move to N+1-i, inter-cell entries to N-i, delta-type values map to
    -conj(delta) and an A-sublattice bias becomes a B-sublattice bias of opposite sign.
    """
    if name in ("mu1", "mu2"):
        return name, site, value
    if name == "bias_a":
        return "bias_b", N + 1 - site, -value
    if name == "bias_b":
        return "bias_a", N + 1 - site, -value
    mirrored_site = N + 1 - site if name.endswith("_intra") else N - site
    if name.startswith("delta"):
        value = -np.conj(value)
    return name, mirrored_site, value


def displaced_params(base, values, side="left"):
    """
    Apply protocol curve values as displacements from the fine-tuned rest values.

    Parameters:
    - base: DriveParams the protocol is run around.
    - values: dict {(name, site): value}; site is 1-based and None for mu1/mu2.
    - side: "left" or "right" (mirror every entry first).

    Returns:
    - DriveParams instance.
    """
    arrays = {}
    scalars = {}
    for (name, site), value in values.items():
        if side == "right":
            name, site, value = mirror_override(name, site, value, base.N)
        shift = value - IDEAL_FIELD_VALUES[name]
        if site is None:
            scalars[name] = getattr(base, name) + float(np.real(shift))
            continue
        if not 1 <= site <= base.N:
            raise InvalidParameters(f"Override of {name} at site {site} outside 1..{base.N}")
        if name not in arrays:
            arrays[name] = np.array(getattr(base, name))
        base_value = getattr(base, name)[site - 1]
        arrays[name][site - 1] = base_value + (shift if np.iscomplexobj(arrays[name]) else np.real(shift))
    return base.replace(**arrays, **scalars)


def ideal_patch(base, depth, side="left"):
    """
    Set every coupling and bias of the first `depth` sites of one edge to its fine-tuned value.

    Parameters:
    - base: DriveParams.
    - depth: int, number of edge sites (intra-cell entries and the inter-cell bonds leaving them).
    - side: "left" or "right".

    Returns:
    - DriveParams instance.
    """
    if side not in SIDES:
        raise InvalidParameters(f"Invalid side {side!r}. Choose from {SIDES}.")
    arrays = {name: np.array(getattr(base, name)) for name in SITE_FIELDS}
    for site in range(1, min(depth, base.N) + 1):
        for name in SITE_FIELDS:
            target, target_site, value = name, site, IDEAL_FIELD_VALUES[name]
            if side == "right":
                target, target_site, value = mirror_override(name, site, value, base.N)
            if 1 <= target_site <= base.N:
                arrays[target][target_site - 1] = value
    return base.replace(**arrays)


def blend_params(base, target, weight):
    """Site-wise (1 - weight) * base + weight * target of every coupling and bias; mu1, mu2 follow base."""
    changes = {name: (1 - weight) * getattr(base, name) + weight * getattr(target, name) for name in SITE_FIELDS}
    return base.replace(**changes)


class GenericProtocol:
    """
    Adiabatic protocol built from consecutive parameter steps around a base DriveParams.

    Protocols with a `reach` (the last site their curves touch) run on a working point whose
    edge region is exactly fine-tuned. When the base differs from it there, an "enter" step
    ramps the edge region onto the working point and a mirror "exit" step ramps it back.
    """
    name = "generic"
    reach = None

    def __init__(self, params, side="left", M=400, ramp="linear"):
        """
        Parameters:
        - params: DriveParams the protocol starts and ends at.
        - side: "left" or "right" edge.
        - M: int, even number of driving periods per step.
        - ramp: "linear" (phi = (pi/2) u) or "smoothstep".
        """
        self.params = params
        self.side = side
        self.M = M
        self.ramp = ramp

    def phi(self, u):
        """Protocol angle in [0, pi/2] at progress u."""
        if self.ramp == "smoothstep":
            u = 3 * u ** 2 - 2 * u ** 3
        return np.pi / 2 * u

    @property
    def active_modes(self):
        return ()

    def options(self):
        return {"side": self.side, "M": self.M, "ramp": self.ramp}

    def build(self):
        """
        Assemble the Schedule.

        Each step's curve overrides the values it moves and holds the end values of all
        earlier steps, so consecutive steps join continuously.

        Returns:
        - Schedule instance.
        """
        if not isinstance(self.params, DriveParams):
            raise TypeError("params must be a DriveParams instance")
        if self.side not in SIDES:
            raise InvalidParameters(f"Invalid side {self.side!r}. Choose from {SIDES}.")
        if self.ramp not in RAMPS:
            raise InvalidParameters(f"Invalid ramp {self.ramp!r}. Choose from {RAMPS}.")
        if int(self.M) != self.M or self.M < 2 or self.M % 2:
            raise OddDuration(f"Periods per step must be even and at least 2, got {self.M}")
        self._validate()

        core = self.working_point()
        held = {}
        steps = []
        for step_name, cadence, moving in self._build_steps():
            steps.append(ScheduleStep(step_name, int(self.M), self._curve(core, dict(held), moving), cadence))
            held.update(moving(1.0))
        if core is not self.params:
            steps.insert(0, ScheduleStep(ENTRY_STEP, int(self.M), self._ramp(core, leaving=False)))
            steps.append(ScheduleStep(EXIT_STEP, int(self.M), self._ramp(core, leaving=True)))
            logger.debug("Base of %s deviates from the fine-tuned edge, adding entry and exit ramps", self.full_name)
        schedule = Schedule(self.full_name, steps, self.params, self.active_modes, self.options())
        logger.info("Built schedule %s with %d steps (%d periods)", schedule.name, len(steps), schedule.total_periods)
        return schedule

    @property
    def full_name(self):
        return f"{self.name}_{self.side}"

    def working_point(self):
        """
        Parameters the protocol curves are applied to.

        Returns:
        - self.params when the protocol has no reach or its edge region is already fine-tuned,
          otherwise the base with EDGE_PATCH (at least reach + 2) edge sites fine-tuned.
        """
        if self.reach is None:
            return self.params
        core = ideal_patch(self.params, max(EDGE_PATCH, self.reach + 2), self.side)
        if core.max_deviation(self.params) == 0.0:
            return self.params
        return core

    def _curve(self, base, held, moving):
        side = self.side

        def curve(u):
            return displaced_params(base, {**held, **moving(u)}, side)

        return curve

    def _ramp(self, core, leaving):
        base = self.params

        def curve(u):
            weight = self.phi(1 - u if leaving else u) / (np.pi / 2)
            return blend_params(base, core, weight)

        return curve

    def _validate(self):
        pass

    def _build_steps(self):
        """
        Define the protocol steps.
        This method should be implemented by subclasses.

        Returns:
        - list of (name, cadence, moving) where moving(u) returns the {(field, site): value}
          entries the step sweeps, written for the left edge at the fine-tuned point.
        """
        raise NotImplementedError("Subclasses should implement this method.")

