import logging

import numpy as np
from scipy.linalg import block_diag

from ..exceptions import InvalidParameters
from .drive_params import DriveParams
from .majorana_index import fermion_mode, majorana_index

logger = logging.getLogger(__name__)


class QuadraticHamiltonian(np.ndarray):
    """
    Real antisymmetric generator A of a Majorana-bilinear Hamiltonian, H*T = (i/4) gamma^T A gamma.

    The coupling weight of the ordered pair (a, b), i.e. the coefficient of i gamma_a gamma_b
    in H*T, is A[a, b] / 2.
    """
    def __new__(cls, input_array, constant_shift=0.0):
        """
        Create a new QuadraticHamiltonian instance, inheriting from numpy.ndarray.

        Parameters:
        - input_array: numpy array, square real matrix. Only its strict upper triangle is kept,
          the lower triangle is rebuilt as its negative transpose.
        - constant_shift: float, identity part of H*T dropped from the bilinear form.
        """
        if not isinstance(input_array, np.ndarray):
            raise TypeError("Input must be a numpy array")
        if input_array.ndim != 2 or input_array.shape[0] != input_array.shape[1]:
            raise ValueError("Input must be a square 2D numpy array")
        if input_array.shape[0] % 4 != 0:
            raise ValueError("Dimension must be a multiple of 4 (four Majoranas per site)")
        if np.iscomplexobj(input_array):
            if np.any(np.abs(input_array.imag) > 1e-12):
                raise ValueError("Generator must be real")
            input_array = input_array.real
        if not np.all(np.isfinite(input_array)):
            raise InvalidParameters("Generator contains non-finite entries")

        upper = np.triu(np.asarray(input_array, dtype=float), k=1)
        obj = (upper - upper.T).view(cls)
        obj.constant_shift = float(constant_shift)
        return obj

    def __array_finalize__(self, obj):
        if obj is None:
            return
        self.constant_shift = getattr(obj, 'constant_shift', 0.0)

    @property
    def dimension(self):
        return self.shape[0]

    def coupling(self, a, b):
        """Coefficient of i gamma_a gamma_b in H*T."""
        return float(self[a, b]) / 2

    def couplings(self, tol=1e-12):
        """
        List of the non-zero couplings with a < b.

        Returns:
        - list of (a, b, weight) tuples, weight = coefficient of i gamma_a gamma_b.
        """
        rows, cols = np.nonzero(np.abs(np.triu(np.asarray(self), k=1)) > tol)
        return [(int(a), int(b), self.coupling(a, b)) for a, b in zip(rows, cols)]

    def __add__(self, other):
        result = np.add(np.asarray(self), np.asarray(other))
        shift = self.constant_shift + getattr(other, 'constant_shift', 0.0)
        return QuadraticHamiltonian(result, constant_shift=shift)


def _bdg_to_majorana(h, D):
    """
    Majorana generator of H = sum h_mn c_m^dag c_n + 1/2 sum (D_mn c_m^dag c_n^dag + h.c.).

    Parameters:
    - h: Hermitian n x n matrix.
    - D: antisymmetric n x n matrix.

    Returns:
    - A: real antisymmetric 2n x 2n matrix with H = (i/4) gamma^T A gamma + const.
    - shift: the dropped constant, tr(h)/2.
    """
    n = h.shape[0]
    bdg = np.block([[h, D], [D.conj().T, -h.T]])
    W = np.zeros((2 * n, 2 * n), dtype=complex)
    modes = np.arange(n)
    W[2 * modes, modes] = 1
    W[2 * modes, n + modes] = 1
    W[2 * modes + 1, modes] = 1j
    W[2 * modes + 1, n + modes] = -1j
    A = np.imag(W @ bdg @ W.conj().T) / 2
    return A, float(np.real(np.trace(h))) / 2


def _add_hopping(h, p, q, amplitude):
    h[p, q] += amplitude
    h[q, p] += np.conj(amplitude)


def _add_pairing(D, p, q, amplitude):
    D[p, q] += amplitude
    D[q, p] -= amplitude


def _single_wire_bdg(params, segment):
    N = params.N
    n = 2 * N
    h = np.zeros((n, n), dtype=complex)
    D = np.zeros((n, n), dtype=complex)
    # Segment 2 carries the -i j hopping and +i delta pairing of the second half period
    hop_prefactor, pair_prefactor = (-1.0, 1.0) if segment == 1 else (-1j, 1j)
    if segment == 1:
        hop_intra, hop_inter = params.J_intra, params.J_inter
        pair_intra, pair_inter = params.Delta_intra, params.Delta_inter
    else:
        hop_intra, hop_inter = params.j_intra, params.j_inter
        pair_intra, pair_inter = params.delta_intra, params.delta_inter

    for site in range(1, N + 1):
        a = fermion_mode(site, "A", N)
        b = fermion_mode(site, "B", N)
        _add_hopping(h, b, a, hop_prefactor * hop_intra[site - 1])
        _add_pairing(D, b, a, pair_prefactor * pair_intra[site - 1])
        if site < N:
            a_next = fermion_mode(site + 1, "A", N)
            _add_hopping(h, a_next, b, hop_prefactor * hop_inter[site - 1])
            _add_pairing(D, a_next, b, pair_prefactor * pair_inter[site - 1])

    if segment == 2:
        # On-site bias V enters as -V n, i.e. (i V / 2) gamma^alpha gamma^beta
        for site in range(1, N + 1):
            h[fermion_mode(site, "A", N), fermion_mode(site, "A", N)] -= params.bias_a[site - 1]
            h[fermion_mode(site, "B", N), fermion_mode(site, "B", N)] -= params.bias_b[site - 1]
    return h, D


def build_segment(params, segment, include_break=True):
    """
    Majorana generator of one half-period Hamiltonian.

    Parameters:
    - params: DriveParams.
    - segment: 1 or 2.
    - include_break: bool, add the mu1/mu2 symmetry-breaking term to segment 1.

    Returns:
    - QuadraticHamiltonian of dimension 4*N*wires.
    """
    if not isinstance(params, DriveParams):
        raise TypeError("params must be a DriveParams instance")
    if segment not in (1, 2):
        raise InvalidParameters(f"segment must be 1 or 2, got {segment!r}")

    h, D = _single_wire_bdg(params, segment)
    A, shift = _bdg_to_majorana(h, D)
    A = block_diag(*([A] * params.wires))
    hamiltonian = QuadraticHamiltonian(A, constant_shift=shift * params.wires)
    if segment == 1 and include_break and (params.mu1 or params.mu2):
        hamiltonian = hamiltonian + build_break_term(params)
    logger.debug("Built segment %d generator with %d couplings", segment, len(hamiltonian.couplings()))
    return hamiltonian


def build_break_term(params):
    """
    Chiral-symmetry-breaking term sum_i (mu1 + mu2) n_{A,i} + (mu1 - mu2) n_{B,i}.

    The identity part (mu1 + mu2)/2 + (mu1 - mu2)/2 per site is kept in constant_shift.

    Parameters:
    - params: DriveParams.

    Returns:
    - QuadraticHamiltonian with on-site alpha-beta couplings only.
    """
    if not isinstance(params, DriveParams):
        raise TypeError("params must be a DriveParams instance")
    N = params.N
    h = np.zeros((2 * N, 2 * N), dtype=complex)
    for site in range(1, N + 1):
        h[fermion_mode(site, "A", N), fermion_mode(site, "A", N)] = params.mu1 + params.mu2
        h[fermion_mode(site, "B", N), fermion_mode(site, "B", N)] = params.mu1 - params.mu2
    A, shift = _bdg_to_majorana(h, np.zeros_like(h))
    A = block_diag(*([A] * params.wires))
    return QuadraticHamiltonian(A, constant_shift=shift * params.wires)


def mirror_majorana(N, wires=1):
    """
    Orthogonal reflection of the Majorana basis exchanging the two chain ends.

    alpha_{A,i} -> beta_{B,j}, beta_{A,i} -> alpha_{B,j}, alpha_{B,i} -> -beta_{A,j},
    beta_{B,i} -> -alpha_{A,j} with j = N + 1 - i. The ideal-case generators commute with it.

    Parameters:
    - N: int, sites per wire.
    - wires: int.

    Returns:
    - R: numpy array (4*N*wires, 4*N*wires), acting on coefficient vectors as v -> R v.
    """
    images = {
        ("A", "alpha"): ("B", "beta", 1.0),
        ("A", "beta"): ("B", "alpha", 1.0),
        ("B", "alpha"): ("A", "beta", -1.0),
        ("B", "beta"): ("A", "alpha", -1.0),
    }
    R = np.zeros((4 * N * wires, 4 * N * wires))
    for wire in range(wires):
        for site in range(1, N + 1):
            for (sublattice, species), (target_sub, target_species, sign) in images.items():
                source = majorana_index(site, sublattice, species, N, wire)
                target = majorana_index(N + 1 - site, target_sub, target_species, N, wire)
                R[target, source] = sign
    return R
