import numpy as np
import pytest
from scipy.linalg import expm

from floqmajorana.evolve import floquet_propagator
from floqmajorana.exceptions import InvalidParameters, TooLarge
from floqmajorana.fockoracle import (
    FockSpace,
    FockState,
    oracle_covariance,
    oracle_hamiltonian,
    oracle_propagator,
    random_mode_pair,
    random_params,
    validate_against_oracle,
)
from floqmajorana.gaussian import CovarianceState
from floqmajorana.lattice import DriveParams


def test_mode_limits():
    with pytest.raises(TooLarge):
        FockSpace(9)
    with pytest.raises(InvalidParameters):
        FockSpace(0)


def test_majoranas_satisfy_clifford_algebra():
    space = FockSpace(3)
    identity = np.eye(space.dim)
    for a, first in enumerate(space.majoranas):
        for b, second in enumerate(space.majoranas):
            anticommutator = first @ second + second @ first
            assert np.allclose(anticommutator, 2 * identity * (a == b))


def test_vacuum_covariance_matches_gaussian_vacuum():
    space = FockSpace(4)
    exact = oracle_covariance(space.vacuum(), space, N=2)
    assert np.allclose(exact, CovarianceState.vacuum(2))


def test_fock_state_validation():
    with pytest.raises(ValueError):
        FockState(np.ones(4))
    with pytest.raises(InvalidParameters):
        FockSpace(2).basis_state([0])


def test_gaussian_unitary_heisenberg_action():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(6, 6))
    A = X - X.T
    space = FockSpace(3)
    assert np.allclose(space.heisenberg_map(space.gaussian_unitary(A)), expm(A), atol=1e-10)


@pytest.mark.parametrize("segment", [1, 2])
def test_oracle_hamiltonian_is_hermitian(segment):
    H = oracle_hamiltonian(random_params(2, rng=3), segment)
    assert np.allclose(H, H.conj().T)


def test_oracle_hamiltonian_rejects_bad_segment():
    with pytest.raises(InvalidParameters):
        oracle_hamiltonian(DriveParams.ideal(1), 3)


@pytest.mark.parametrize("seed", range(3))
def test_heisenberg_map_matches_free_fermion_propagator(seed):
    params = random_params(2, rng=seed)
    space = FockSpace.for_params(params)
    U = oracle_propagator(params)
    assert np.allclose(space.heisenberg_map(U), floquet_propagator(params), atol=1e-8)


def test_two_wire_propagator_matches():
    params = random_params(1, rng=4, wires=2)
    space = FockSpace.for_params(params)
    assert np.allclose(space.heisenberg_map(oracle_propagator(params)), floquet_propagator(params), atol=1e-8)


def test_oracle_propagator_conserves_parity():
    params = random_params(2, rng=5)
    U = oracle_propagator(params)
    P = FockSpace.for_params(params).parity()
    assert np.allclose(U @ P, P @ U)
    assert np.allclose(U.conj().T @ U, np.eye(U.shape[0]))


def test_random_draws_cover_overrides_and_bias():
    params = random_params(3, rng=11)
    assert not params.is_homogeneous()
    assert np.all(params.bias_a != 0) and np.all(params.bias_b != 0)
    assert len(set(params.j_inter)) == 3
    assert random_params(3, rng=11, site_dependent=False).is_homogeneous()


def test_random_mode_pair_is_orthonormal():
    a, b = random_mode_pair(12, rng=2)
    assert np.isclose(a @ a, 1.0) and np.isclose(b @ b, 1.0)
    assert abs(a @ b) < 1e-12


@pytest.mark.parametrize("N", [2, 3])
def test_validation_passes(N):
    report = validate_against_oracle(N=N, draws=5, rng=7)
    assert report["passed"]
    for key in ("propagator", "covariance", "measurement"):
        assert report[key] <= 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("N", [2, 3])
def test_validation_over_fifty_draws(N):
    report = validate_against_oracle(N=N, draws=50, rng=N)
    assert report["passed"]
    assert max(report["propagator"], report["covariance"], report["measurement"]) <= 1e-8
