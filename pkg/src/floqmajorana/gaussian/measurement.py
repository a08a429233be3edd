import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..exceptions import IncompatibleModes, ZeroProbabilityBranch
from .covariance_state import CovarianceState

logger = logging.getLogger(__name__)

ZERO_PROBABILITY = 1e-12


def make_rng(seed=None):
    """
    Counter-based generator (Philox) for measurement outcomes.

    Parameters:
    - seed: int, SeedSequence, an existing Generator (returned unchanged) or None.

    Returns:
    - numpy.random.Generator.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(sequence))


def spawn_rngs(seed, count):
    """Independent child generators of one seed, for parallel shots."""
    return [make_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def _seed_of(rng):
    sequence = getattr(rng.bit_generator, "seed_seq", None)
    if sequence is None:
        return None
    entropy = sequence.entropy
    spawn_key = tuple(sequence.spawn_key)
    return entropy if not spawn_key else (entropy, spawn_key)


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome of one projective measurement of i gamma_a gamma_b."""
    pair: Tuple[str, str]
    outcome: int
    probability: float
    seed: Optional[object] = None
    forced: bool = False

    def __post_init__(self):
        if self.outcome not in (1, -1):
            raise ValueError("outcome must be +1 or -1")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("probability must lie in [0, 1]")


def _unit_pair(a, b, dimension):
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.shape != (dimension,) or b.shape != (dimension,):
        raise IncompatibleModes("Mode vectors do not match the state dimension")
    if abs(np.linalg.norm(a) - 1) > 1e-8 or abs(np.linalg.norm(b) - 1) > 1e-8 or abs(a @ b) > 1e-8:
        raise IncompatibleModes("Measured pair must be two orthonormal mode vectors")
    return a, b


def parity_probability(state, a, b, outcome):
    """Born probability (1 + outcome <i gamma_a gamma_b>)/2."""
    m = float(np.asarray(a) @ np.asarray(state) @ np.asarray(b))
    return min(max((1 + outcome * m) / 2, 0.0), 1.0)


def measure_parity(state, a, b, force=None, rng=None, labels=("a", "b")):
    """
    Projective measurement of i gamma_a gamma_b on a pure Gaussian state.

    Parameters:
    - state: CovarianceState.
    - a, b: orthonormal mode vectors (arrays or ModeVector).
    - force: None, +1 or -1; a forced branch must have probability above 1e-12.
    - rng: seed or numpy Generator used when the outcome is sampled.
    - labels: names stored in the MeasurementRecord.

    Returns:
    - record: MeasurementRecord.
    - state: post-measurement CovarianceState with <i gamma_a gamma_b> = outcome.
    """
    if not isinstance(state, CovarianceState):
        raise TypeError("state must be a CovarianceState")
    M = np.asarray(state)
    a, b = _unit_pair(a, b, M.shape[0])
    m = float(a @ M @ b)

    seed = None
    if force is None:
        rng = make_rng(rng)
        seed = _seed_of(rng)
        outcome = 1 if rng.random() < (1 + m) / 2 else -1
    else:
        if force not in (1, -1):
            raise ValueError("force must be +1, -1 or None")
        outcome = int(force)
    probability = parity_probability(state, a, b, outcome)
    if probability < ZERO_PROBABILITY:
        raise ZeroProbabilityBranch(f"Outcome {outcome:+d} of {labels} has probability {probability:.2e}")

    x = -M @ a
    y = -M @ b
    projector = np.eye(M.shape[0]) - np.outer(a, a) - np.outer(b, b)
    updated = M + outcome * (np.outer(y, x) - np.outer(x, y)) / (1 + outcome * m)
    updated = projector @ updated @ projector + outcome * (np.outer(a, b) - np.outer(b, a))

    record = MeasurementRecord(tuple(labels), outcome, probability, seed=seed, forced=force is not None)
    logger.debug("Measured %s -> %+d (p = %.6f)", labels, outcome, probability)
    return record, state.with_matrix(updated)
