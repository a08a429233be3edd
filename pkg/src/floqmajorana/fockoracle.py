"""
Exact many-body reference for small chains.

Fermion modes are Jordan-Wigner ordered like MajoranaIndex: mode m = (w*N + i - 1)*2 + s owns
gamma_{2m} = c_m + c_m^dag and gamma_{2m+1} = i(c_m - c_m^dag). Basis states are occupation
strings with mode 0 as the most significant bit.
"""
import logging
from functools import reduce

import numpy as np
from scipy.linalg import expm
from tqdm import tqdm

from .evolve import floquet_propagator
from .exceptions import InvalidParameters, TooLarge, ZeroProbabilityBranch
from .gaussian import CovarianceState, evolve_state, make_rng, measure_parity
from .lattice import SEGMENT1_FIELDS, SEGMENT2_FIELDS, DriveParams, fermion_mode

logger = logging.getLogger(__name__)

MAX_MODES = 8
ORACLE_TOL = 1e-8
ANNIHILATE = np.array([[0, 1], [0, 0]], dtype=complex)
STRING = np.diag([1.0, -1.0]).astype(complex)
IDENTITY = np.eye(2, dtype=complex)


def _kron_all(factors):
    return reduce(np.kron, factors)


class FockSpace:
    """
    Dense Fock space of n_modes fermions with Jordan-Wigner operators.
    """
    def __init__(self, n_modes):
        """
        Parameters:
        - n_modes: int, number of complex fermion modes (at most 8).
        """
        if n_modes < 1:
            raise InvalidParameters("Need at least one fermion mode")
        if n_modes > MAX_MODES:
            raise TooLarge(f"{n_modes} modes exceed the exact-oracle limit of {MAX_MODES}")
        self.n_modes = n_modes
        self.dim = 2 ** n_modes
        self.annihilators = [
            _kron_all([STRING] * m + [ANNIHILATE] + [IDENTITY] * (n_modes - m - 1)) for m in range(n_modes)
        ]
        self.majoranas = []
        for c in self.annihilators:
            self.majoranas.append(c + c.conj().T)
            self.majoranas.append(1j * (c - c.conj().T))

    @classmethod
    def for_params(cls, params):
        """Fock space of all 2*N*wires lattice fermions."""
        return cls(2 * params.N * params.wires)

    def number(self, mode):
        c = self.annihilators[mode]
        return c.conj().T @ c

    def parity(self):
        """Total parity (-1)^(sum n) as a dense diagonal matrix."""
        return _kron_all([STRING] * self.n_modes)

    def majorana_combination(self, v):
        """gamma_v = sum_a v_a gamma_a."""
        operator = np.zeros((self.dim, self.dim), dtype=complex)
        for coefficient, gamma in zip(np.asarray(v), self.majoranas):
            if coefficient != 0:
                operator += coefficient * gamma
        return operator

    def bilinear(self, A):
        """(i/4) gamma^T A gamma for a real antisymmetric A."""
        A = np.asarray(A)
        operator = np.zeros((self.dim, self.dim), dtype=complex)
        for a, b in zip(*np.nonzero(A)):
            operator += A[a, b] * self.majoranas[a] @ self.majoranas[b]
        return 0.25j * operator

    def gaussian_unitary(self, A):
        """exp(-i (i/4) gamma^T A gamma), whose Heisenberg action on Majoranas is exp(A)."""
        return expm(-1j * self.bilinear(A))

    def heisenberg_map(self, U):
        """
        Matrix O with U^dag gamma_a U = sum_b O_ab gamma_b.

        Returns:
        - real numpy array (2*n_modes, 2*n_modes).
        """
        n = len(self.majoranas)
        O = np.zeros((n, n))
        for a in range(n):
            evolved = U.conj().T @ self.majoranas[a] @ U
            for b in range(n):
                O[a, b] = np.real(np.trace(evolved @ self.majoranas[b])) / self.dim
        return O

    def basis_state(self, occupations):
        """
        FockState with the given occupation string.

        Parameters:
        - occupations: sequence of 0/1 of length n_modes.
        """
        if len(occupations) != self.n_modes:
            raise InvalidParameters("Occupation string must have one entry per mode")
        index = int("".join(str(int(n)) for n in occupations), 2)
        vector = np.zeros(self.dim, dtype=complex)
        vector[index] = 1.0
        return FockState(vector)

    def vacuum(self):
        return self.basis_state([0] * self.n_modes)


class FockState(np.ndarray):
    """
    Normalized many-body amplitude vector.
    """
    def __new__(cls, input_array):
        """
        Create a new FockState instance, inheriting from numpy.ndarray.

        Parameters:
        - input_array: numpy array, 1D amplitudes of unit norm (within 1e-12).
        """
        if not isinstance(input_array, np.ndarray):
            raise TypeError("Input must be a numpy array")
        if input_array.ndim != 1:
            raise ValueError("Input must be a 1D numpy array")
        norm = np.linalg.norm(input_array)
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"Fock state must be normalized (norm {norm})")
        return np.asarray(input_array, dtype=complex).view(cls)

    @classmethod
    def normalized(cls, vector):
        vector = np.asarray(vector, dtype=complex)
        return cls(vector / np.linalg.norm(vector))

    def expectation(self, operator):
        array = np.asarray(self)
        return complex(array.conj() @ operator @ array)


def oracle_hamiltonian(params, segment, include_break=True):
    """
    Dense many-body H*T of one segment, built from creation and annihilation operators.

    Parameters:
    - params: DriveParams with 2*N*wires <= 8.
    - segment: 1 or 2.
    - include_break: bool, add the mu1/mu2 term to segment 1.

    Returns:
    - complex Hermitian numpy array.
    """
    if not isinstance(params, DriveParams):
        raise TypeError("params must be a DriveParams instance")
    space = FockSpace.for_params(params)
    return _hamiltonian(space, params, segment, include_break)


def _hamiltonian(space, params, segment, include_break):
    N = params.N
    c = space.annihilators
    H = np.zeros((space.dim, space.dim), dtype=complex)
    if segment == 1:
        hopping = (-1.0, params.J_intra, params.J_inter)
        pairing = (1.0, params.Delta_intra, params.Delta_inter)
    elif segment == 2:
        hopping = (-1j, params.j_intra, params.j_inter)
        pairing = (1j, params.delta_intra, params.delta_inter)
    else:
        raise InvalidParameters(f"segment must be 1 or 2, got {segment!r}")

    for wire in range(params.wires):
        def op(site, sublattice):
            return c[fermion_mode(site, sublattice, N, wire)]

        for site in range(1, N + 1):
            bonds = [(op(site, "B"), op(site, "A"), hopping[1][site - 1], pairing[1][site - 1])]
            if site < N:
                bonds.append((op(site + 1, "A"), op(site, "B"), hopping[2][site - 1], pairing[2][site - 1]))
            for left, right, t, d in bonds:
                term = hopping[0] * t * left.conj().T @ right + pairing[0] * d * left.conj().T @ right.conj().T
                H += term + term.conj().T
            if segment == 2:
                H -= params.bias_a[site - 1] * op(site, "A").conj().T @ op(site, "A")
                H -= params.bias_b[site - 1] * op(site, "B").conj().T @ op(site, "B")
            elif include_break:
                H += (params.mu1 + params.mu2) * op(site, "A").conj().T @ op(site, "A")
                H += (params.mu1 - params.mu2) * op(site, "B").conj().T @ op(site, "B")
    return H


def oracle_propagator(params, include_break=True):
    """
    Many-body Floquet operator exp(-i H2 T/2) exp(-i H1 T/2).

    Returns:
    - complex unitary numpy array of dimension 2^(2*N*wires).
    """
    space = FockSpace.for_params(params)
    H1 = _hamiltonian(space, params, 1, include_break)
    H2 = _hamiltonian(space, params, 2, include_break)
    return expm(-0.5j * H2) @ expm(-0.5j * H1)


def oracle_covariance(state, space=None, N=None, wires=1):
    """
    Exact M_ab = <(i/2)[gamma_a, gamma_b]> of a Fock state.

    Returns:
    - CovarianceState instance.
    """
    array = np.asarray(state)
    if space is None:
        space = FockSpace(int(np.log2(array.shape[0])))
    n = len(space.majoranas)
    M = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            commutator = space.majoranas[a] @ space.majoranas[b] - space.majoranas[b] @ space.majoranas[a]
            M[a, b] = np.real(0.5j * (array.conj() @ commutator @ array))
            M[b, a] = -M[a, b]
    return CovarianceState(M, N=N, wires=wires)


def oracle_measure(state, space, a, b, outcome):
    """
    Project onto i gamma_a gamma_b = outcome and renormalize.

    Returns:
    - probability: float.
    - FockState after the projection.
    """
    parity = 1j * space.majorana_combination(a) @ space.majorana_combination(b)
    projector = (np.eye(space.dim) + outcome * parity) / 2
    projected = projector @ np.asarray(state)
    probability = float(np.real(np.vdot(projected, projected)))
    if probability < 1e-12:
        raise ZeroProbabilityBranch(f"Outcome {outcome:+d} has probability {probability:.2e}")
    return probability, FockState.normalized(projected)


def random_params(N, rng=None, wires=1, spread=np.pi, site_dependent=True):
    """
    DriveParams with all eight couplings and both potentials drawn at random.

    With site_dependent every site gets its own couplings and a random segment-2 bias on both
    sublattices; otherwise the chain is homogeneous and unbiased. Segment-2 couplings are
    complex, magnitudes are uniform in [0, spread).
    """
    rng = make_rng(rng)
    size = N if site_dependent else 1
    fields = {name: rng.uniform(0, spread, size) for name in SEGMENT1_FIELDS}
    for name in SEGMENT2_FIELDS:
        fields[name] = rng.uniform(0, spread, size) * np.exp(2j * np.pi * rng.random(size))
    bias = {}
    if site_dependent:
        bias = {"bias_a": rng.uniform(-spread, spread, N), "bias_b": rng.uniform(-spread, spread, N)}
    else:
        fields = {name: value[0] for name, value in fields.items()}
    return DriveParams(N, fields, mu1=rng.uniform(-0.5, 0.5), mu2=rng.uniform(-0.5, 0.5), wires=wires, **bias)


def random_mode_pair(dim, rng=None):
    """Two orthonormal real mode vectors, uniformly oriented."""
    Q, _ = np.linalg.qr(make_rng(rng).normal(size=(dim, 2)))
    return Q[:, 0], Q[:, 1]


def validate_against_oracle(N=2, draws=10, periods=3, rng=None, progress=False):
    """
    Compare the free-fermion layer with exact many-body evolution on random drives.

    For every draw the Heisenberg map of the many-body Floquet operator is compared with the
    orthogonal propagator, the vacuum is evolved for `periods` periods on both sides, and both
    outcomes of two parity measurements are compared: one on the first site and one on a random
    orthonormal mode pair. Every draw has site-dependent couplings and bias (see random_params).

    Parameters:
    - N: int, sites (2*N fermion modes, at most 8).
    - draws: int, number of random parameter sets.
    - periods: int.
    - rng: seed or Generator.

    Returns:
    - dict with the largest propagator, covariance and measurement deviations and "passed".
    """
    rng = make_rng(rng)
    worst = {"propagator": 0.0, "covariance": 0.0, "measurement": 0.0}
    for _ in tqdm(range(draws), desc="Oracle validation", disable=not progress):
        params = random_params(N, rng)
        space = FockSpace.for_params(params)
        O = np.asarray(floquet_propagator(params))
        U = oracle_propagator(params)
        worst["propagator"] = max(worst["propagator"], float(np.max(np.abs(space.heisenberg_map(U) - O))))

        psi = np.asarray(space.vacuum())
        state = CovarianceState.vacuum(N)
        for _ in range(periods):
            psi = U @ psi
            state = evolve_state(state, O)
        exact = oracle_covariance(FockState.normalized(psi), space, N=N)
        worst["covariance"] = max(worst["covariance"], float(np.max(np.abs(np.asarray(exact) - np.asarray(state)))))

        first_site = np.eye(4 * N)[:, [0, 3]]
        for a, b in ((first_site[:, 0], first_site[:, 1]), random_mode_pair(4 * N, rng)):
            for outcome in (1, -1):
                try:
                    probability, projected = oracle_measure(FockState.normalized(psi), space, a, b, outcome)
                    record, measured = measure_parity(state, a, b, force=outcome)
                except ZeroProbabilityBranch:
                    continue
                exact = np.asarray(oracle_covariance(projected, space, N=N))
                deviation = max(abs(record.probability - probability), float(np.max(np.abs(exact - np.asarray(measured)))))
                worst["measurement"] = max(worst["measurement"], deviation)

    worst["passed"] = max(worst["propagator"], worst["covariance"], worst["measurement"]) <= ORACLE_TOL
    logger.info("Oracle validation at N=%d over %d draws: %s", N, draws, worst)
    return worst
