import numpy as np
import pytest

from floqmajorana import topology
from floqmajorana.evolve import floquet_propagator, spectrum
from floqmajorana.exceptions import InvalidParameters, NonIntegerResult, OverridesPresent
from floqmajorana.lattice import DriveParams
from floqmajorana.lattice.drive_params import IDEAL_UNIFORM
from floqmajorana.topology import (
    _winding,
    bloch,
    phase_diagram,
    symmetric_frame_operators,
    symmetry_check,
    winding_invariants,
)


def perturbed(N, rng, magnitude=0.24):
    values = {key: value + rng.uniform(-magnitude, magnitude) for key, value in IDEAL_UNIFORM.items()}
    return DriveParams.uniform(N, **values)


def test_ideal_invariants():
    result = winding_invariants(DriveParams.ideal(4), grid=512)
    assert result.as_tuple() == (2, 1)
    assert max(result.residuals.values()) <= 1e-6


def test_off_ideal_point_keeps_invariants():
    assert winding_invariants(DriveParams.off_ideal(4)).as_tuple() == (2, 1)


def test_grid_lower_bound():
    with pytest.raises(InvalidParameters):
        winding_invariants(DriveParams.ideal(4), grid=16)


def test_winding_estimate_matches_count_on_a_resolved_loop():
    ks = -np.pi + 2 * np.pi * np.arange(64) / 64
    count, estimate, step = _winding(np.exp(2j * ks) * (np.exp(1j * ks) - 0.5))
    assert count == 3
    assert abs(estimate - 3) < 1e-10
    assert step < np.pi / 2


def test_winding_estimate_exposes_an_unresolved_loop():
    # A zero at distance 0.01 from the unit circle needs far more than 64 points
    ks = -np.pi + 2 * np.pi * np.arange(64) / 64
    count, estimate, step = _winding(np.exp(1j * ks) - 0.99)
    assert count == 1
    assert step < np.pi / 2
    assert np.isclose(estimate, 1 / (1 - 0.99 ** 64))


class _DiagonalBlocks:
    def __init__(self, k, shift):
        self.k = k
        self.shift = shift

    def canonical_blocks(self):
        return {"b": np.diag([np.exp(1j * self.k) - self.shift, 1.0]), "d": np.eye(2, dtype=complex)}


@pytest.mark.parametrize("shift", [0.5, 0.99])
def test_unresolved_winding_is_rejected(monkeypatch, shift):
    monkeypatch.setattr(topology, "bloch", lambda params, k: _DiagonalBlocks(k, shift))
    if shift < 0.9:
        result = winding_invariants(DriveParams.ideal(4), grid=64)
        assert result.as_tuple() == (1, 0)
        assert max(result.residuals.values()) < 1e-10
    else:
        with pytest.raises(NonIntegerResult):
            winding_invariants(DriveParams.ideal(4), grid=64)


def test_bloch_needs_homogeneous_params():
    with pytest.raises(OverridesPresent):
        winding_invariants(DriveParams.ideal(4).with_bias(2, 0.5))
    with pytest.raises(OverridesPresent):
        winding_invariants(DriveParams.ideal(4).with_axis("j1", 0.3j))


@pytest.mark.parametrize("params", [DriveParams.ideal(4), DriveParams.off_ideal(4)])
def test_symmetries_hold(params):
    report = symmetry_check(params, k_samples=32)
    assert set(report) == {"chiral", "particle_hole", "time_reversal"}
    assert max(report.values()) < 1e-10


def test_chiral_symmetry_broken_by_mu():
    report = symmetry_check(DriveParams.ideal(4).replace(mu1=0.1, mu2=0.05), k_samples=16)
    assert report["chiral"] > 1e-3


def test_bloch_operators_are_unitary():
    operator = bloch(DriveParams.off_ideal(4), 0.7)
    assert operator.unitarity_error() < 1e-12
    F, G = symmetric_frame_operators(DriveParams.off_ideal(4), 0.7)
    assert np.allclose(F @ G, operator.U)


def test_phase_diagram_serial_rows_in_order():
    values = [2 * np.pi, 2 * np.pi + 0.1, 2 * np.pi - 0.1]
    frame = phase_diagram(DriveParams.ideal(4), "j2", values, grid=256, processes=1, progress=False)
    assert list(frame.columns) == ["axis_value", "nu0", "nu_pi", "gap_flag"]
    assert list(frame["axis_value"]) == values
    assert not frame["gap_flag"].any()
    assert (frame["nu0"] == 2).all() and (frame["nu_pi"] == 1).all()


def test_phase_diagram_pool_matches_serial():
    values = np.linspace(0.5, 7.0, 5)
    serial = phase_diagram(DriveParams.ideal(4), "j2", values, grid=128, processes=1, progress=False)
    pooled = phase_diagram(DriveParams.ideal(4), "j2", values, grid=128, processes=2, progress=False)
    assert serial.equals(pooled)


def test_phase_diagram_requires_params():
    with pytest.raises(TypeError):
        phase_diagram({"N": 4}, "j2", [1.0])


@pytest.mark.parametrize("seed", range(5))
def test_bulk_boundary_correspondence(seed):
    params = perturbed(60, np.random.default_rng(seed))
    nu0, nu_pi = winding_invariants(params).as_tuple()
    counts = spectrum(floquet_propagator(params)).counts()
    assert counts["zero_left"] == counts["zero_right"] == nu0
    assert counts["pi_left"] == counts["pi_right"] == nu_pi


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5, 25))
def test_bulk_boundary_correspondence_full(seed):
    test_bulk_boundary_correspondence(seed)
