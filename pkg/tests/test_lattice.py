import json

import numpy as np
import pytest

from floqmajorana.exceptions import InvalidParameters
from floqmajorana.lattice import (
    DriveParams,
    MajoranaIndex,
    build_break_term,
    build_segment,
    fermion_mode,
    majorana_index,
    mirror_majorana,
    QuadraticHamiltonian,
)


@pytest.mark.parametrize(
    "site, sublattice, species, wire, expected",
    [
        (1, "A", "alpha", 0, 0),
        (1, "A", "beta", 0, 1),
        (1, "B", "alpha", 0, 2),
        (2, "A", "alpha", 0, 4),
        (3, "B", "beta", 0, 11),
        (1, "A", "alpha", 1, 12),
    ],
)
def test_majorana_index_flattening(site, sublattice, species, wire, expected):
    assert majorana_index(site, sublattice, species, N=3, wire=wire) == expected
    assert MajoranaIndex.from_flat(expected, N=3) == MajoranaIndex(site, sublattice, species, wire)


def test_fermion_mode_owns_consecutive_majoranas():
    mode = fermion_mode(2, "B", N=4)
    assert majorana_index(2, "B", "alpha", N=4) == 2 * mode
    assert majorana_index(2, "B", "beta", N=4) == 2 * mode + 1


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(site=0, sublattice="A", species="alpha"),
        dict(site=1, sublattice="C", species="alpha"),
        dict(site=1, sublattice="A", species="gamma"),
    ],
)
def test_majorana_index_rejects_bad_labels(kwargs):
    with pytest.raises(InvalidParameters):
        MajoranaIndex(**kwargs)


def test_site_outside_chain():
    with pytest.raises(InvalidParameters):
        majorana_index(5, "A", "alpha", N=4)


def test_ideal_params_values():
    params = DriveParams.ideal(5)
    assert np.allclose(params.J_intra, np.pi / 2)
    assert np.allclose(params.j_inter, 2 * np.pi)
    assert np.allclose(params.j_intra, 0)
    assert params.is_homogeneous()
    assert params.n_majoranas == 20


@pytest.mark.parametrize("N", [0, -3, 2.5])
def test_invalid_site_count(N):
    with pytest.raises(InvalidParameters):
        DriveParams.ideal(N)


def test_segment1_fields_must_be_real():
    with pytest.raises(InvalidParameters):
        DriveParams.ideal(4).with_overrides([(2, "J_intra", 1 + 1j)])


def test_override_site_range():
    with pytest.raises(InvalidParameters):
        DriveParams.ideal(4).with_overrides([(5, "j_intra", 1.0)])


def test_params_are_immutable():
    params = DriveParams.ideal(4)
    with pytest.raises(ValueError):
        params.J_intra[0] = 0.0


def test_with_bias_and_overrides():
    params = DriveParams.ideal(6).with_overrides([(2, "j_inter", 1.5), {"site": 3, "field": "delta_intra", "value": 0.5, "phase": np.pi / 2}])
    params = params.with_bias(5, 0.3, sublattice="B")
    assert params.j_inter[1] == 1.5
    assert np.isclose(params.delta_intra[2], 0.5j)
    assert params.bias_b[4] == 0.3
    assert not params.is_homogeneous()


def test_json_round_trip():
    params = DriveParams.off_ideal(6).with_overrides([(2, "j_inter", 1.0 + 0.5j)]).with_bias(3, 0.7)
    params = params.replace(mu1=0.1, mu2=0.05)
    text = json.dumps(params.to_dict(), sort_keys=True)
    assert DriveParams.from_dict(json.loads(text)) == params


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(InvalidParameters):
        DriveParams.from_dict({"N": 4, "uniform": {"J3": 1.0}})
    with pytest.raises(InvalidParameters):
        DriveParams.from_dict({"uniform": {"J1": 1.0}})


def test_with_axis():
    params = DriveParams.ideal(4)
    assert np.allclose(params.with_axis("j2", 3.0).j_inter, 3.0)
    assert params.with_axis("mu1", 0.2).mu1 == 0.2
    with pytest.raises(InvalidParameters):
        params.with_axis("bias_a", 1.0)


@pytest.mark.parametrize("segment", [1, 2])
def test_generator_is_antisymmetric(segment):
    h = build_segment(DriveParams.off_ideal(5), segment)
    assert isinstance(h, QuadraticHamiltonian)
    assert np.allclose(h, -h.T)
    assert h.shape == (20, 20)


def test_ideal_segment1_couples_neighbouring_sites_only():
    h = build_segment(DriveParams.ideal(4), 1)
    for a, b, _ in h.couplings():
        assert abs(MajoranaIndex.from_flat(a, 4).site - MajoranaIndex.from_flat(b, 4).site) <= 1


def test_break_term_is_on_site():
    params = DriveParams.ideal(3).replace(mu1=0.1, mu2=0.05)
    term = build_break_term(params)
    for a, b, weight in term.couplings():
        assert b == a + 1 and a % 2 == 0
    with_break = build_segment(params, 1)
    without = build_segment(params, 1, include_break=False)
    assert np.allclose(with_break - without, term)


def test_multi_wire_generator_is_block_diagonal():
    h = np.asarray(build_segment(DriveParams.off_ideal(3, wires=2), 2))
    assert np.allclose(h[:12, 12:], 0)
    assert np.allclose(h[:12, :12], h[12:, 12:])


def test_mirror_is_an_orthogonal_symmetry_of_the_ideal_chain():
    N = 5
    R = mirror_majorana(N)
    assert np.allclose(R.T @ R, np.eye(4 * N))
    for segment in (1, 2):
        A = np.asarray(build_segment(DriveParams.ideal(N), segment))
        assert np.allclose(R @ A @ R.T, A)


def test_quadratic_hamiltonian_validation():
    with pytest.raises(TypeError):
        QuadraticHamiltonian([[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        QuadraticHamiltonian(np.zeros((6, 6)))
