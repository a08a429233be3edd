import logging

import numpy as np
import pandas as pd
from scipy.linalg import schur
from tqdm import tqdm

from ..exceptions import InvalidParameters
from ..lattice import DriveParams
from .propagator import OrthogonalPropagator, floquet_propagator

logger = logging.getLogger(__name__)

PINNING_TOL = 1e-6
DEFAULT_N_LOC = 4


def eigenphases(O):
    """
    Eigenphases eps*T in (-pi, pi] of an orthogonal matrix, with U|eps> = exp(-i eps T)|eps>.

    Returns:
    - eps: numpy array, unsorted.
    - Z: unitary whose columns are the matching eigenvectors (complex Schur vectors of a normal matrix).
    """
    T, Z = schur(np.asarray(O, dtype=complex), output='complex')
    eps = -np.angle(np.diag(T))
    eps[eps <= -np.pi] += 2 * np.pi
    return eps, Z


def site_masks(N, wires, n_loc):
    """
    Boolean masks over Majorana indices selecting the outermost n_loc sites at each end of every wire.

    Returns:
    - left, right: numpy boolean arrays of length 4*N*wires.
    """
    site = (np.arange(4 * N * wires) // 4) % N + 1
    n_loc = min(n_loc, N)
    return site <= n_loc, site > N - n_loc


def pinned_splittings(O, n_zero=4, n_pi=2, periods=1):
    """
    Deviation of the pinned eigenphases from 0 and pi.

    With periods=1 the n_zero eigenphases closest to 0 and the n_pi closest to pi are used.
    With periods=2 the eigenphases of O^2 are used, whose n_zero + n_pi phases closest to 0
    are halved to one-period units.

    Returns:
    - (zero_splitting, pi_splitting): floats; with periods=2 both equal the joint value.
    """
    if periods == 1:
        eps, _ = eigenphases(O)
        zero = np.sort(np.abs(eps))[:n_zero]
        pi = np.sort(np.pi - np.abs(eps))[:n_pi]
        return float(np.max(zero, initial=0.0)), float(np.max(pi, initial=0.0))
    if periods == 2:
        array = np.asarray(O)
        eps, _ = eigenphases(array @ array)
        joint = float(np.max(np.sort(np.abs(eps))[:n_zero + n_pi], initial=0.0)) / 2
        return joint, joint
    raise InvalidParameters(f"periods must be 1 or 2, got {periods!r}")


class SpectrumReport:
    """
    Eigenphases of a one- or two-period propagator with edge localization of each eigenvector.
    """
    def __init__(self, eigenphases, vectors, left_weight, right_weight, periods=1, tol=PINNING_TOL):
        order = np.argsort(eigenphases, kind='stable')
        self.eigenphases = np.asarray(eigenphases)[order]
        self.vectors = np.asarray(vectors)[:, order]
        self.left_weight = np.asarray(left_weight)[order]
        self.right_weight = np.asarray(right_weight)[order]
        self.periods = periods
        self.tol = tol

    @property
    def edge_weight(self):
        return self.left_weight + self.right_weight

    @property
    def flags(self):
        """Per-eigenvector label: "zero", "pi" or "" for unpinned states."""
        flags = np.full(self.eigenphases.shape, "", dtype=object)
        flags[np.abs(self.eigenphases) < self.tol] = "zero"
        flags[np.pi - np.abs(self.eigenphases) < self.tol] = "pi"
        return flags

    def counts(self):
        """
        Number of pinned modes per edge, from the left/right weight carried by each pinned eigenspace.

        Returns:
        - dict with keys zero_left, zero_right, pi_left, pi_right (rounded to integers).
        """
        flags = self.flags
        counts = {}
        for flag in ("zero", "pi"):
            mask = flags == flag
            counts[f"{flag}_left"] = int(round(float(np.sum(self.left_weight[mask]))))
            counts[f"{flag}_right"] = int(round(float(np.sum(self.right_weight[mask]))))
        return counts

    def to_frame(self):
        return pd.DataFrame({
            "index": np.arange(len(self.eigenphases)),
            "eigenphase": self.eigenphases,
            "edge_weight": self.edge_weight,
            "flag": self.flags,
        })

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format="%.12g")
        logger.info("Wrote spectrum table to %s", path)


def spectrum(O, n_loc=DEFAULT_N_LOC, periods=1, N=None, wires=1, tol=PINNING_TOL):
    """
    Quasienergy report of a propagator.

    Parameters:
    - O: OrthogonalPropagator (one period).
    - n_loc: int, number of outermost sites counted as edge at each end.
    - periods: 1 for U, 2 for U^2.
    - N: int, sites per wire; inferred from the dimension for a single wire.
    - wires: int.
    - tol: float, pinning tolerance on eps*T.

    Returns:
    - SpectrumReport instance.
    """
    if not isinstance(O, OrthogonalPropagator):
        raise TypeError("O must be an OrthogonalPropagator")
    if periods not in (1, 2):
        raise InvalidParameters(f"periods must be 1 or 2, got {periods!r}")
    array = np.asarray(O)
    if periods == 2:
        array = array @ array
    if N is None:
        N = array.shape[0] // (4 * wires)
    eps, Z = eigenphases(array)
    left, right = site_masks(N, wires, n_loc)
    probability = np.abs(Z) ** 2
    return SpectrumReport(eps, Z, probability[left].sum(axis=0), probability[right].sum(axis=0), periods=periods, tol=tol)


def spectrum_scan(params_template, axis, values, n_loc=DEFAULT_N_LOC, progress=True):
    """
    Open-boundary eigenphases as one scalar parameter is varied.

    Parameters:
    - params_template: DriveParams providing all other parameters.
    - axis: str, a uniform key (e.g. "j2"), a field name, "mu1" or "mu2".
    - values: iterable of floats.
    - n_loc: int.
    - progress: bool, show a tqdm bar.

    Returns:
    - pandas DataFrame with columns axis_value, index, eigenphase, edge_weight, flag.
    """
    if not isinstance(params_template, DriveParams):
        raise TypeError("params_template must be a DriveParams instance")
    frames = []
    values = list(values)
    for value in tqdm(values, desc=f"Scanning {axis}", disable=not progress):
        params = params_template.with_axis(axis, value)
        report = spectrum(floquet_propagator(params), n_loc=n_loc, N=params.N, wires=params.wires)
        frame = report.to_frame()
        frame.insert(0, "axis_value", value)
        frames.append(frame)
    logger.info("Spectrum scan over %s finished (%d points)", axis, len(values))
    return pd.concat(frames, ignore_index=True)
