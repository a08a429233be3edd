import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import svd

from ..exceptions import GaugeAmbiguity, InvalidParameters, WrongDegeneracy
from ..lattice import majorana_index
from .propagator import OrthogonalPropagator
from .spectrum import PINNING_TOL, eigenphases

logger = logging.getLogger(__name__)

MODE_NAMES = ("zero1_left", "zero2_left", "pi_left", "pi_right", "zero1_right", "zero2_right")
ZERO_MODES = ("zero1_left", "zero2_left", "zero1_right", "zero2_right")
PI_MODES = ("pi_left", "pi_right")
MIN_ALIGNMENT = 0.5


@dataclass(frozen=True)
class ModeVector:
    """A named Majorana edge mode gamma_v = sum_a v_a gamma_a."""
    vector: np.ndarray
    kind: str
    side: str
    index: int = 0

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.vector, dtype=dtype)


class EdgeModeSet(np.ndarray):
    """
    The six edge Majoranas of one wire as columns of a (4*N*W, 6) real matrix,
    ordered zero1_left, zero2_left, pi_left, pi_right, zero1_right, zero2_right.
    """
    def __new__(cls, input_array, wire=0, splitting=0.0):
        """
        Create a new EdgeModeSet instance, inheriting from numpy.ndarray.

        Parameters:
        - input_array: numpy array of shape (dim, 6), real columns.
        - wire: int, wire holding these modes.
        - splitting: float, largest pinning deviation of the eigenspaces they were taken from.
        """
        if not isinstance(input_array, np.ndarray):
            raise TypeError("Input must be a numpy array")
        if input_array.ndim != 2 or input_array.shape[1] != len(MODE_NAMES):
            raise ValueError("Input must be a 2D numpy array with six columns")
        obj = np.asarray(input_array, dtype=float).view(cls)
        obj.wire = wire
        obj.splitting = float(splitting)
        return obj

    def __array_finalize__(self, obj):
        if obj is None:
            return
        self.wire = getattr(obj, 'wire', 0)
        self.splitting = getattr(obj, 'splitting', 0.0)

    def mode(self, name):
        """Coefficient vector of a named mode."""
        if name not in MODE_NAMES:
            raise InvalidParameters(f"Unknown mode {name!r}. Choose from {MODE_NAMES}.")
        return np.asarray(self)[:, MODE_NAMES.index(name)].copy()

    def mode_vector(self, name):
        kind, side = name.split("_")
        index = int(kind[-1]) if kind.startswith("zero") else 0
        return ModeVector(self.mode(name), kind.rstrip("12"), side, index)

    def block(self, names):
        """Columns of the given modes as a (dim, len(names)) array."""
        return np.column_stack([self.mode(name) for name in names])

    @property
    def zero_block(self):
        return self.block(ZERO_MODES)

    @property
    def pi_block(self):
        return self.block(PI_MODES)

    def orthonormality_error(self):
        array = np.asarray(self)
        return float(np.max(np.abs(array.T @ array - np.eye(array.shape[1]))))

    def transported(self, O):
        """Copy with every column mapped through O (v -> O v)."""
        return EdgeModeSet(np.asarray(O) @ np.asarray(self), wire=self.wire, splitting=self.splitting)


def ideal_edge_modes(N, wire=0, wires=1):
    """
    Closed-form edge modes at the ideal point, all supported on sites 1 and N.

    Parameters:
    - N: int, sites per wire (at least 2).
    - wire: int, wire the modes live on.
    - wires: int, total number of wires (sets the vector length).

    Returns:
    - EdgeModeSet instance.
    """
    if N < 2:
        raise InvalidParameters("Edge modes need at least two sites.")

    def unit(site, sublattice, species):
        vector = np.zeros(4 * N * wires)
        vector[majorana_index(site, sublattice, species, N, wire)] = 1.0
        return vector

    root = 1 / np.sqrt(2)
    columns = [
        unit(1, "A", "alpha"),
        root * (unit(1, "A", "beta") - unit(1, "B", "alpha")),
        root * (unit(1, "A", "beta") + unit(1, "B", "alpha")),
        root * (unit(N, "A", "beta") - unit(N, "B", "alpha")),
        root * (unit(N, "A", "beta") + unit(N, "B", "alpha")),
        unit(N, "B", "beta"),
    ]
    return EdgeModeSet(np.column_stack(columns), wire=wire)


def _real_basis(Z):
    """Orthonormal real basis of the conjugation-closed span of complex columns Z."""
    stacked = np.hstack([Z.real, Z.imag])
    U, s, _ = svd(stacked, full_matrices=False)
    return U[:, :Z.shape[1]]


def _align(basis, reference):
    """
    Orthonormal vectors inside span(basis) closest to the reference columns (orthogonal Procrustes).
    """
    U, _, Vt = svd(basis.T @ reference)
    return basis @ (U @ Vt)


def pinned_subspaces(O, n_zero, n_pi, tol=PINNING_TOL):
    """
    Real orthonormal bases of the +1 and -1 eigenspaces of an orthogonal matrix.

    Returns:
    - zero_basis: (dim, n_zero) array.
    - pi_basis: (dim, n_pi) array.
    - splitting: float, largest deviation of the selected eigenphases from 0 or pi.
    """
    eps, Z = eigenphases(O)
    zero_mask = np.abs(eps) < tol
    pi_mask = np.pi - np.abs(eps) < tol
    if zero_mask.sum() != n_zero or pi_mask.sum() != n_pi:
        raise WrongDegeneracy(
            f"Expected {n_zero} zero and {n_pi} pi pinned eigenvalues, found {zero_mask.sum()} and {pi_mask.sum()}"
        )
    splitting = max(np.max(np.abs(eps[zero_mask]), initial=0.0), np.max(np.pi - np.abs(eps[pi_mask]), initial=0.0))
    return _real_basis(Z[:, zero_mask]), _real_basis(Z[:, pi_mask]), float(splitting)


def edge_modes(O, reference=None, N=None, wire=0, wires=1, tol=PINNING_TOL):
    """
    Six gauge-fixed edge Majoranas of one wire.

    Within the +1 (zero) and -1 (pi) eigenspaces the basis is rotated onto the reference
    vectors by orthogonal Procrustes alignment, which also fixes signs.

    Parameters:
    - O: OrthogonalPropagator of one period.
    - reference: EdgeModeSet or None (ideal-case modes of the wire).
    - N: int, sites per wire; inferred for a single wire.
    - wire: int, wire to extract (its diagonal block of O is used).
    - wires: int.
    - tol: float, pinning tolerance.

    Returns:
    - EdgeModeSet instance.
    """
    if not isinstance(O, OrthogonalPropagator):
        raise TypeError("O must be an OrthogonalPropagator")
    array = np.asarray(O)
    if N is None:
        N = array.shape[0] // (4 * wires)
    if reference is None:
        reference = ideal_edge_modes(N, wire=wire, wires=wires)
    if reference.shape[0] != array.shape[0]:
        raise ValueError("Reference modes and propagator have different dimensions")

    block = slice(4 * N * wire, 4 * N * (wire + 1))
    zero_basis, pi_basis, splitting = pinned_subspaces(array[block, block], 4, 2, tol=tol)

    ref = np.asarray(reference)[block]
    columns = np.zeros((array.shape[0], len(MODE_NAMES)))
    zero_columns = [MODE_NAMES.index(name) for name in ZERO_MODES]
    pi_columns = [MODE_NAMES.index(name) for name in PI_MODES]
    columns[block, zero_columns] = _align(zero_basis, ref[:, zero_columns])
    columns[block, pi_columns] = _align(pi_basis, ref[:, pi_columns])

    overlaps = np.einsum('ij,ij->j', columns[block], ref)
    if np.min(overlaps) < MIN_ALIGNMENT:
        worst = MODE_NAMES[int(np.argmin(overlaps))]
        raise GaugeAmbiguity(f"Mode {worst} aligns with its reference only to {np.min(overlaps):.3f}")
    logger.debug("Edge modes extracted, minimum reference overlap %.6f", np.min(overlaps))
    return EdgeModeSet(columns, wire=wire, splitting=splitting)


def adiabaticity_metrics(trajectory, evolved, splittings=()):
    """
    Diabatic error and maximal pinning deviation along an adiabatic run.

    Parameters:
    - trajectory: EdgeModeSet or sequence of EdgeModeSets; the last one spans the final
      instantaneous edge subspace.
    - evolved: (dim, k) array of transported mode vectors.
    - splittings: optional iterable of recorded eigenphase deviations.

    Returns:
    - dict with keys diabatic_error and max_splitting.
    """
    if isinstance(trajectory, EdgeModeSet):
        trajectory = [trajectory]
    trajectory = list(trajectory)
    if not trajectory:
        raise InvalidParameters("Trajectory must contain at least one EdgeModeSet")
    final = np.asarray(trajectory[-1])
    evolved = np.asarray(evolved)
    if evolved.ndim == 1:
        evolved = evolved[:, None]
    # The six columns are orthonormal, so the projector is final final^T
    captured = np.sum((final.T @ evolved) ** 2, axis=0) / np.sum(evolved ** 2, axis=0)
    diabatic_error = float(np.max(1 - captured))
    max_splitting = max([modes.splitting for modes in trajectory] + [float(value) for value in splittings])
    return {"diabatic_error": max(diabatic_error, 0.0), "max_splitting": max_splitting}
