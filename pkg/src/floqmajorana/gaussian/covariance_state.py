import json
import logging
from pathlib import Path

import numpy as np
from pfapack import pfaffian as pf

logger = logging.getLogger(__name__)

ANTISYMMETRY_TOL = 1e-10
PURITY_TOL = 1e-8


class CovarianceState(np.ndarray):
    """
    Majorana covariance matrix M_ab = <(i/2)[gamma_a, gamma_b]> of a pure fermionic Gaussian state.
    """
    def __new__(cls, input_array, N=None, wires=1, check=True):
        """
        Create a new CovarianceState instance, inheriting from numpy.ndarray.

        Parameters:
        - input_array: numpy array, real antisymmetric square matrix.
        - N: int, sites per wire (inferred from the dimension when omitted).
        - wires: int.
        - check: bool, verify antisymmetry and the singular-value bound.
        """
        if not isinstance(input_array, np.ndarray):
            raise TypeError("Input must be a numpy array")
        if input_array.ndim != 2 or input_array.shape[0] != input_array.shape[1]:
            raise ValueError("Input must be a square 2D numpy array")
        if input_array.shape[0] % (4 * wires) != 0:
            raise ValueError("Dimension must be a multiple of 4 * wires")
        array = np.asarray(np.real_if_close(input_array), dtype=float)
        if check:
            asymmetry = float(np.max(np.abs(array + array.T), initial=0.0))
            if asymmetry > ANTISYMMETRY_TOL:
                raise ValueError(f"Covariance matrix must be antisymmetric (deviation {asymmetry:.2e})")
            if array.size and np.linalg.norm(array, 2) > 1 + 1e-9:
                raise ValueError("Covariance matrix has singular values above 1")
        obj = ((array - array.T) / 2).view(cls)
        obj.N = array.shape[0] // (4 * wires) if N is None else int(N)
        obj.wires = int(wires)
        return obj

    def __array_finalize__(self, obj):
        if obj is None:
            return
        self.N = getattr(obj, 'N', None)
        self.wires = getattr(obj, 'wires', 1)

    @classmethod
    def vacuum(cls, N, wires=1):
        """State with every lattice fermion c_{s,i} empty, i gamma^alpha gamma^beta = +1."""
        block = np.array([[0.0, 1.0], [-1.0, 0.0]])
        return cls(np.kron(np.eye(2 * N * wires), block), N=N, wires=wires)

    def with_matrix(self, matrix):
        """Same-shaped state carrying a new matrix."""
        return CovarianceState(np.asarray(matrix), N=self.N, wires=self.wires, check=False)

    def purity_error(self):
        """Max-norm of M M + I (zero for pure states)."""
        array = np.asarray(self)
        return float(np.max(np.abs(array @ array + np.eye(array.shape[0]))))

    def is_pure(self, tol=PURITY_TOL):
        return self.purity_error() <= tol


def total_parity(state):
    """
    Global fermion parity, the sign of the Pfaffian of M.

    Returns:
    - int, +1 or -1.
    """
    value = pf.pfaffian(np.asarray(state, dtype=float))
    return 1 if np.real(value) >= 0 else -1


def save_state(state, path, metadata=None):
    """
    Write a snapshot as <path>.npy plus <path>.json metadata.

    Parameters:
    - state: CovarianceState.
    - path: str or Path without suffix.
    - metadata: optional dict merged into the JSON file.
    """
    path = Path(path)
    np.save(path.with_suffix(".npy"), np.asarray(state))
    info = {
        "N": state.N,
        "wires": state.wires,
        "basis": "(wire, site, sublattice A<B, species alpha<beta) lexicographic",
    }
    info.update(metadata or {})
    with open(path.with_suffix(".json"), "w") as handle:
        json.dump(info, handle, indent=2, sort_keys=True)
    logger.info("Saved covariance snapshot to %s", path.with_suffix(".npy"))


def load_state(path):
    """
    Read a snapshot written by save_state.

    Returns:
    - CovarianceState instance.
    """
    path = Path(path)
    with open(path.with_suffix(".json")) as handle:
        info = json.load(handle)
    matrix = np.load(path.with_suffix(".npy"))
    return CovarianceState(matrix, N=info["N"], wires=info["wires"])
