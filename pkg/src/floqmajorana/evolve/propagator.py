import logging

import numpy as np
from scipy.linalg import eigh, polar

from ..lattice import DriveParams, QuadraticHamiltonian, build_segment

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOL = 1e-10


class OrthogonalPropagator(np.ndarray):
    """
    Heisenberg action O of a Gaussian unitary U on Majorana operators, U^dag gamma U = O gamma.

    Products accumulate on the left: evolving by O1 and then O2 is O2 @ O1.
    """
    def __new__(cls, input_array, check=True):
        """
        Create a new OrthogonalPropagator instance, inheriting from numpy.ndarray.

        Parameters:
        - input_array: numpy array, square real orthogonal matrix.
        - check: bool, verify orthogonality (tolerance 1e-8).
        """
        if not isinstance(input_array, np.ndarray):
            raise TypeError("Input must be a numpy array")
        if input_array.ndim != 2 or input_array.shape[0] != input_array.shape[1]:
            raise ValueError("Input must be a square 2D numpy array")
        if np.iscomplexobj(input_array):
            input_array = np.real_if_close(input_array, tol=1e6)
            if np.iscomplexobj(input_array):
                raise ValueError("Propagator must be real")
        obj = np.asarray(input_array, dtype=float).view(cls)
        if check and obj.orthogonality_error() > 1e-8:
            raise ValueError(f"Matrix is not orthogonal (error {obj.orthogonality_error():.2e})")
        return obj

    @classmethod
    def identity(cls, dimension):
        return cls(np.eye(dimension), check=False)

    def orthogonality_error(self):
        """Max-norm of O^T O - I."""
        array = np.asarray(self)
        return float(np.max(np.abs(array.T @ array - np.eye(array.shape[0]))))

    def renormalized(self):
        """
        Closest orthogonal matrix (polar factor), used after long products.

        Returns:
        - OrthogonalPropagator instance.
        """
        error = self.orthogonality_error()
        if error <= ORTHOGONALITY_TOL:
            return self
        logger.warning("Orthogonality drift %.2e renormalized by polar decomposition", error)
        unitary, _ = polar(np.asarray(self))
        return OrthogonalPropagator(unitary, check=False)

    def then(self, other):
        """Propagator of evolving by self first and other afterwards (other @ self)."""
        return OrthogonalPropagator(np.asarray(other) @ np.asarray(self), check=False)

    def power(self, k):
        return OrthogonalPropagator(np.linalg.matrix_power(np.asarray(self), k), check=False).renormalized()

    def transport(self, vectors):
        """
        Schroedinger-picture transport of Majorana coefficient vectors, v -> O v.

        Parameters:
        - vectors: array of shape (dim,) or (dim, k).

        Returns:
        - numpy array of the same shape.
        """
        return np.asarray(self) @ np.asarray(vectors)


def propagate(h, fraction):
    """
    Orthogonal map exp(fraction * A) generated by a quadratic Hamiltonian over a fraction of T.

    The exponential is taken through the eigendecomposition of the Hermitian matrix iA, so
    the output is orthogonal to round-off.

    Parameters:
    - h: QuadraticHamiltonian.
    - fraction: float in [0, 1].

    Returns:
    - OrthogonalPropagator instance.
    """
    if not isinstance(h, QuadraticHamiltonian):
        raise TypeError("h must be a QuadraticHamiltonian")
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    A = np.asarray(h)
    if fraction == 0 or not np.any(A):
        return OrthogonalPropagator.identity(A.shape[0])
    w, V = eigh(1j * A)
    exponential = (V * np.exp(-1j * fraction * w)) @ V.conj().T
    return OrthogonalPropagator(exponential.real, check=False).renormalized()


def segment_propagators(params, include_break=True):
    """
    Half-period maps (O1, O2) of the two Hamiltonian segments.

    Returns:
    - tuple of OrthogonalPropagator.
    """
    O1 = propagate(build_segment(params, 1, include_break=include_break), 0.5)
    O2 = propagate(build_segment(params, 2), 0.5)
    return O1, O2


def floquet_propagator(params, include_break=True):
    """
    One-period map of U = exp(-i H2 T/2) exp(-i H1 T/2), i.e. O2 @ O1.

    Parameters:
    - params: DriveParams.
    - include_break: bool, include the mu1/mu2 term in segment 1.

    Returns:
    - OrthogonalPropagator instance.
    """
    if not isinstance(params, DriveParams):
        raise TypeError("params must be a DriveParams instance")
    O1, O2 = segment_propagators(params, include_break=include_break)
    return O1.then(O2)
