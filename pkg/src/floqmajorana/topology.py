"""
Momentum-space Floquet operators, their symmetries and the zero/pi winding invariants.

Nambu spinor (c_{A,k}, c_{B,k}, c^dag_{A,-k}, c^dag_{B,-k}); 4x4 operators are written as
kron(tau, sigma) with tau acting on particle-hole and sigma on sublattice.
"""
import logging
from multiprocessing import Pool, cpu_count

import numpy as np
import pandas as pd
from scipy.linalg import expm
from tqdm import tqdm

from .exceptions import GapClosed, InvalidParameters, NonIntegerResult, OverridesPresent
from .lattice import DriveParams

logger = logging.getLogger(__name__)

GAP_TOL = 1e-8
RESIDUAL_TOL = 1e-6
MIN_GRID = 64
DEFAULT_GRID = 512

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _tau_sigma(tau, sigma):
    return np.kron(tau, sigma)


GAMMA = _tau_sigma(IDENTITY, PAULI_Z)
TAU_X = _tau_sigma(PAULI_X, IDENTITY)
SIGMA_Z_TAU_X = _tau_sigma(PAULI_X, PAULI_Z)

# Rotation to the basis in which the chiral operator is tau_z
CANONICAL_BASIS = (
    (_tau_sigma(IDENTITY, IDENTITY + PAULI_X) + _tau_sigma(PAULI_Z, IDENTITY - PAULI_X)) / 2
) @ (
    (_tau_sigma(IDENTITY + PAULI_X, IDENTITY) + _tau_sigma(IDENTITY - PAULI_X, PAULI_Z)) / 2
)


class BlochOperator:
    """
    Bloch Hamiltonians h1(k), h2(k) and the symmetric-frame operators F(k), G(k), U(k) = F G.
    """
    def __init__(self, k, h1, h2):
        self.k = float(k)
        self.h1 = h1
        self.h2 = h2
        half1 = expm(-0.25j * h1)
        half2 = expm(-0.25j * h2)
        self.F = half1 @ half2
        self.G = half2 @ half1
        self.U = self.F @ self.G

    def unitarity_error(self):
        """Largest deviation of F, G, U from unitarity."""
        return max(
            float(np.max(np.abs(M.conj().T @ M - np.eye(4)))) for M in (self.F, self.G, self.U)
        )

    def canonical_blocks(self):
        """
        F in the canonical basis split into 2x2 blocks.

        Returns:
        - dict with keys a, b, c, d.
        """
        F = CANONICAL_BASIS.conj().T @ self.F @ CANONICAL_BASIS
        return {"a": F[:2, :2], "b": F[:2, 2:], "c": F[2:, :2], "d": F[2:, 2:]}


def _dot_sigma_real_hopping(x1, x2, k):
    """(x1 + x2 cos k) sigma_x - x2 sin k sigma_y"""
    return (x1 + x2 * np.cos(k)) * PAULI_X - x2 * np.sin(k) * PAULI_Y


def _dot_sigma_imaginary(x1, x2, k):
    """(x1 - x2 cos k) sigma_y - x2 sin k sigma_x"""
    return (x1 - x2 * np.cos(k)) * PAULI_Y - x2 * np.sin(k) * PAULI_X


def bloch_hamiltonians(params, k):
    """
    Bloch matrices h1(k), h2(k) of a homogeneous chain (times T).

    Returns:
    - h1, h2: 4x4 complex numpy arrays.
    """
    if not isinstance(params, DriveParams):
        raise TypeError("params must be a DriveParams instance")
    if not params.is_homogeneous():
        raise OverridesPresent("Bloch operators need homogeneous parameters (no per-site overrides or bias)")
    values = params.uniform_values()
    for key in ("j1", "j2", "delta1", "delta2"):
        if values[key].imag != 0:
            raise OverridesPresent(f"Bloch operators need real {key}")
        values[key] = values[key].real

    J = _dot_sigma_real_hopping(values["J1"], values["J2"], k)
    Delta = _dot_sigma_imaginary(values["Delta1"], values["Delta2"], k)
    j = _dot_sigma_imaginary(values["j1"], values["j2"], k)
    delta = _dot_sigma_imaginary(values["delta1"], values["delta2"], k)

    h1 = -_tau_sigma(PAULI_Z, J) + _tau_sigma(PAULI_Y, Delta)
    if params.mu1 or params.mu2:
        h1 = h1 + _tau_sigma(PAULI_Z, params.mu1 * IDENTITY + params.mu2 * PAULI_Z)
    h2 = -_tau_sigma(IDENTITY, j) + _tau_sigma(PAULI_X, delta)
    return h1, h2


def bloch(params, k):
    """
    Symmetric-frame Floquet operator at quasimomentum k.

    Parameters:
    - params: homogeneous DriveParams.
    - k: float.

    Returns:
    - BlochOperator instance.
    """
    h1, h2 = bloch_hamiltonians(params, k)
    return BlochOperator(k, h1, h2)


def symmetric_frame_operators(params, k):
    """F(k) and G(k) of the symmetric time frame."""
    operator = bloch(params, k)
    return operator.F, operator.G


def symmetry_check(params, k_samples=64):
    """
    Deviations from the chiral, particle-hole and time-reversal relations.

    chiral: sigma_z F(k) sigma_z = G(k)^dag
    particle_hole: tau_x U(k)^* tau_x = U(-k)
    time_reversal: (sigma_z tau_x) U(k)^* (sigma_z tau_x) = U(-k)^dag

    Parameters:
    - params: homogeneous DriveParams.
    - k_samples: int (evenly spaced points in (-pi, pi]) or an iterable of k values.

    Returns:
    - dict mapping each symmetry name to its largest deviation.
    """
    if np.isscalar(k_samples):
        ks = -np.pi + 2 * np.pi * (np.arange(int(k_samples)) + 1) / int(k_samples)
    else:
        ks = np.asarray(list(k_samples), dtype=float)
    report = {"chiral": 0.0, "particle_hole": 0.0, "time_reversal": 0.0}
    for k in ks:
        plus = bloch(params, k)
        minus = bloch(params, -k)
        chiral = GAMMA @ plus.F @ GAMMA - plus.G.conj().T
        particle_hole = TAU_X @ plus.U.conj() @ TAU_X - minus.U
        time_reversal = SIGMA_Z_TAU_X @ plus.U.conj() @ SIGMA_Z_TAU_X - minus.U.conj().T
        report["chiral"] = max(report["chiral"], float(np.max(np.abs(chiral))))
        report["particle_hole"] = max(report["particle_hole"], float(np.max(np.abs(particle_hole))))
        report["time_reversal"] = max(report["time_reversal"], float(np.max(np.abs(time_reversal))))
    return report


class WindingResult:
    """Zero and pi winding numbers with the distance of the raw values from integers."""
    def __init__(self, nu0, nu_pi, residuals, min_gap):
        self.nu0 = int(nu0)
        self.nu_pi = int(nu_pi)
        self.residuals = residuals
        self.min_gap = float(min_gap)

    def as_tuple(self):
        return self.nu0, self.nu_pi

    def __repr__(self):
        return f"WindingResult(nu0={self.nu0}, nu_pi={self.nu_pi}, residuals={self.residuals})"


def _winding(determinants):
    """
    Winding of det(k) sampled on a closed uniform k-loop.

    Returns:
    - count: int, the winding summed from the principal-value phase increments.
    - estimate: float, (1/2pi) * integral of Im(det'/det) with det' taken as the spectral
      (FFT) derivative; it only agrees with count when the loop is resolved.
    - step: float, the largest phase increment between neighbouring k-points.
    """
    grid = len(determinants)
    closed = np.append(determinants, determinants[0])
    increments = np.angle(closed[1:] / closed[:-1])
    count = int(round(np.sum(increments) / (2 * np.pi)))
    wavenumbers = np.fft.fftfreq(grid, d=1.0 / grid)
    if grid % 2 == 0:
        wavenumbers[grid // 2] = 0.0
    derivative = np.fft.ifft(1j * wavenumbers * np.fft.fft(determinants))
    estimate = float(np.mean(np.imag(derivative / determinants)))
    return count, estimate, float(np.max(np.abs(increments)))


def winding_invariants(params, grid=DEFAULT_GRID):
    """
    Winding numbers nu0 (block b) and nu_pi (block d) of F(k) in the canonical basis.

    The winding of det b(k), det d(k) is counted from phase increments on a closed k-loop of
    `grid` points. The residual of each is its distance from the spectral-derivative estimate
    of the same winding, so an under-resolved loop raises NonIntegerResult.

    Parameters:
    - params: homogeneous DriveParams.
    - grid: int, at least 64.

    Returns:
    - WindingResult instance.
    """
    if grid < MIN_GRID:
        raise InvalidParameters(f"grid must be at least {MIN_GRID}, got {grid}")
    ks = -np.pi + 2 * np.pi * np.arange(grid) / grid
    det_b = np.empty(grid, dtype=complex)
    det_d = np.empty(grid, dtype=complex)
    for index, k in enumerate(ks):
        blocks = bloch(params, k).canonical_blocks()
        det_b[index] = np.linalg.det(blocks["b"])
        det_d[index] = np.linalg.det(blocks["d"])

    min_gap = float(min(np.min(np.abs(det_b)), np.min(np.abs(det_d))))
    if min_gap < GAP_TOL:
        raise GapClosed(f"Canonical block becomes singular (|det| = {min_gap:.2e}); invariant undefined")

    nu0, estimate0, step0 = _winding(det_b)
    nu_pi, estimate_pi, step_pi = _winding(det_d)
    residuals = {"nu0": abs(estimate0 - nu0), "nu_pi": abs(estimate_pi - nu_pi)}
    if max(residuals.values()) > RESIDUAL_TOL or max(step0, step_pi) > np.pi / 2:
        raise NonIntegerResult(
            f"Winding not resolved on a {grid}-point grid (residuals {residuals}, largest phase step {max(step0, step_pi):.3f})"
        )
    result = WindingResult(nu0, nu_pi, residuals, min_gap)
    logger.debug("Winding invariants %s", result)
    return result


def _phase_point(args):
    params, axis, value, grid = args
    try:
        result = winding_invariants(params.with_axis(axis, value), grid=grid)
        return {"axis_value": value, "nu0": result.nu0, "nu_pi": result.nu_pi, "gap_flag": False}
    except (GapClosed, NonIntegerResult) as error:
        logger.warning("Scan point %s=%s marked gap-closed: %s", axis, value, error)
        return {"axis_value": value, "nu0": np.nan, "nu_pi": np.nan, "gap_flag": True}


def phase_diagram(params_template, axis, values, grid=DEFAULT_GRID, processes=None, progress=True):
    """
    Winding invariants along one parameter axis.

    Points where the invariant is undefined are kept as rows with gap_flag set.

    Parameters:
    - params_template: homogeneous DriveParams.
    - axis: uniform key ("j2", ...), field name, "mu1" or "mu2".
    - values: iterable of axis values.
    - grid: int, k-points per invariant.
    - processes: int or None (all cores); 1 runs serially.
    - progress: bool, show a tqdm bar.

    Returns:
    - pandas DataFrame with columns axis_value, nu0, nu_pi, gap_flag, in input order.
    """
    if not isinstance(params_template, DriveParams):
        raise TypeError("params_template must be a DriveParams instance")
    values = list(values)
    args = [(params_template, axis, value, grid) for value in values]
    if processes == 1 or len(values) <= 1:
        rows = [_phase_point(arg) for arg in tqdm(args, desc=f"Phase diagram over {axis}", disable=not progress)]
    else:
        with Pool(processes or cpu_count()) as pool:
            rows = list(tqdm(pool.imap(_phase_point, args), total=len(args), desc=f"Phase diagram over {axis}", disable=not progress))
    logger.info("Phase diagram over %s finished (%d points, %d gap-closed)", axis, len(rows), sum(row["gap_flag"] for row in rows))
    return pd.DataFrame(rows, columns=["axis_value", "nu0", "nu_pi", "gap_flag"])
