"""
Discrete Wilson lines of the pinned edge subspaces along a schedule's parameter path.

Only the parameter path enters: dynamical phases vanish for pinned quasienergies 0 and pi over an
even number of periods, so the result isolates the geometric part of a braid.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.linalg import polar
from scipy.optimize import linear_sum_assignment
from tqdm import tqdm

from ..evolve import MODE_NAMES, PI_MODES, ZERO_MODES, eigenphases, floquet_propagator, ideal_edge_modes
from ..evolve.edge_modes import _align, _real_basis
from ..exceptions import InvalidParameters, SubspaceDimensionChanged
from .schedule import EVERY_OTHER_PERIOD

logger = logging.getLogger(__name__)

SECTORS = {
    "zero": ZERO_MODES,
    "pi": PI_MODES,
    "combined": MODE_NAMES,
}
HOLONOMY_TOL = 1e-6
UNITARITY_TOL = 1e-8


def monodromy_distance(W):
    """
    Frobenius distance of W from the nearest signed permutation matrix.

    Zero for a holonomy that merely permutes (with signs) the tracked modes.
    """
    W = np.asarray(W, dtype=float)
    rows, cols = linear_sum_assignment(-np.abs(W))
    P = np.zeros_like(W)
    P[rows, cols] = np.sign(W[rows, cols])
    return float(np.linalg.norm(W - P))


@dataclass
class HolonomyResult:
    """Wilson line of one sector; W is the product of the per-step factors closed by the start gauge."""
    sector: str
    modes: Tuple[str, ...]
    W: np.ndarray
    factors: List[np.ndarray] = field(default_factory=list)
    step_names: List[str] = field(default_factory=list)

    def unitarity_error(self):
        return float(np.max(np.abs(self.W.T @ self.W - np.eye(self.W.shape[0]))))

    @property
    def monodromy_distance(self):
        return monodromy_distance(self.W)

    def step_distances(self):
        """monodromy_distance of every per-step factor."""
        return {name: monodromy_distance(factor) for name, factor in zip(self.step_names, self.factors)}

    def to_dict(self):
        return {
            "sector": self.sector,
            "modes": list(self.modes),
            "W": np.round(self.W, 12).tolist(),
            "monodromy_distance": self.monodromy_distance,
            "step_distances": self.step_distances(),
        }


def _sector_basis(params, sector, two_period, tol):
    O = np.asarray(floquet_propagator(params))
    expected = len(SECTORS[sector])
    if two_period or sector == "combined":
        if sector != "combined":
            raise SubspaceDimensionChanged(
                f"The {sector} sector is not resolved by the two-period operator of an every-other-period step"
            )
        eps, Z = eigenphases(O @ O)
        mask = np.abs(eps) < tol
    elif sector == "zero":
        eps, Z = eigenphases(O)
        mask = np.abs(eps) < tol
    else:
        eps, Z = eigenphases(O)
        mask = np.pi - np.abs(eps) < tol
    if mask.sum() != expected:
        raise SubspaceDimensionChanged(
            f"The {sector} subspace has dimension {mask.sum()} instead of {expected}"
        )
    return _real_basis(Z[:, mask])


def wilson_holonomy(schedule, sector="zero", samples=None, tol=HOLONOMY_TOL, progress=True):
    """
    Path-ordered product of polar-unitarized overlaps of the pinned subspace.

    At every step boundary the basis is gauge-fixed by Procrustes alignment with the
    closed-form edge modes, which makes each step's factor well defined.

    Parameters:
    - schedule: closed Schedule.
    - sector: "zero", "pi" or "combined" (the +1 eigenspace of the two-period operator).
    - samples: optional number of samples per step; defaults to the step's own parameter updates.
    - tol: float, eigenphase tolerance defining the pinned subspace.
    - progress: bool.

    Returns:
    - HolonomyResult instance.
    """
    if sector not in SECTORS:
        raise InvalidParameters(f"Unknown sector {sector!r}. Choose from {tuple(SECTORS)}.")
    schedule.require_closed()
    base = schedule.base_params
    if base.wires != 1:
        raise InvalidParameters("Holonomies are computed for a single wire")
    names = SECTORS[sector]
    reference = np.asarray(ideal_edge_modes(base.N, wires=base.wires))[:, [MODE_NAMES.index(name) for name in names]]

    factors = []
    boundary = None
    for step in tqdm(schedule.steps, desc=f"holonomy {schedule.name}", disable=not progress):
        two_period = step.cadence == EVERY_OTHER_PERIOD
        points = step.sample_points() if samples is None else [k / samples for k in range(1, samples + 1)]
        if boundary is None:
            boundary = _align(_sector_basis(step.curve(0.0), sector, two_period, tol), reference)
            start = boundary
        frame = boundary
        basis = None
        for u in points:
            basis = _sector_basis(step.curve(u), sector, two_period, tol)
            unitary, _ = polar(basis.T @ frame)
            frame = basis @ unitary
        boundary = _align(basis, reference)
        factors.append(boundary.T @ frame)
        logger.debug("Holonomy factor of %s: distance %.3e", step.name, monodromy_distance(factors[-1]))

    W = np.eye(len(names))
    for factor in factors:
        W = factor @ W
    # Boundary gauges at the start and the end of a closed path span the same subspace
    W = start.T @ boundary @ W
    result = HolonomyResult(sector, tuple(names), W, factors, [step.name for step in schedule.steps])
    if result.unitarity_error() > UNITARITY_TOL:
        logger.warning("Holonomy of %s deviates from orthogonality by %.2e", schedule.name, result.unitarity_error())
    logger.info("Holonomy %s (%s sector): monodromy distance %.3e", schedule.name, sector, result.monodromy_distance)
    return result
