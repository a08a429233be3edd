import numpy as np
import pytest

from floqmajorana.evolve import edge_modes, floquet_propagator
from floqmajorana.exceptions import IncompatibleModes, InvalidParameters, ZeroProbabilityBranch
from floqmajorana.gaussian import (
    CovarianceState,
    correlation,
    evolve_state,
    init_logical,
    load_state,
    make_rng,
    measure_parity,
    normalize_label,
    parity_probability,
    prepare_ancilla,
    rotate_pair,
    save_state,
    spawn_rngs,
    total_parity,
)
from floqmajorana.lattice import DriveParams


@pytest.fixture(scope="module")
def ideal():
    params = DriveParams.ideal(6)
    O = floquet_propagator(params)
    return O, edge_modes(O)


@pytest.fixture(scope="module")
def off_ideal():
    params = DriveParams.off_ideal(12)
    O = floquet_propagator(params)
    return O, edge_modes(O)


def test_vacuum_is_pure_and_even():
    state = CovarianceState.vacuum(3)
    assert state.is_pure()
    assert total_parity(state) == 1
    assert state.N == 3


@pytest.mark.parametrize(
    "matrix",
    [
        np.ones((4, 4)),
        2 * np.kron(np.eye(2), [[0, 1], [-1, 0]]),
        np.zeros((6, 6)),
    ],
)
def test_covariance_validation(matrix):
    with pytest.raises(ValueError):
        CovarianceState(np.asarray(matrix, dtype=float))


def test_covariance_requires_array():
    with pytest.raises(TypeError):
        CovarianceState([[0, 1], [-1, 0]])


@pytest.mark.parametrize("label, expected", [("01", "01"), ("|10>", "10"), ("|11⟩", "11"), ("|+>", "+")])
def test_normalize_label(label, expected):
    assert normalize_label(label) == expected


def test_normalize_label_rejects_unknown():
    with pytest.raises(InvalidParameters):
        normalize_label("02")


@pytest.mark.parametrize(
    "label, left, pi, right",
    [("00", 1, 1, 1), ("01", 1, -1, -1), ("10", -1, -1, 1), ("11", -1, 1, -1)],
)
def test_logical_state_edge_correlations(ideal, label, left, pi, right):
    O, modes = ideal
    state = init_logical(label, modes, O)
    assert state.is_pure()
    assert np.isclose(correlation(state, modes.mode("zero1_left"), modes.mode("zero2_left")), left)
    assert np.isclose(correlation(state, modes.mode("pi_left"), modes.mode("pi_right")), pi)
    assert np.isclose(correlation(state, modes.mode("zero1_right"), modes.mode("zero2_right")), right)


def test_logical_states_share_total_parity(off_ideal):
    O, modes = off_ideal
    parities = {total_parity(init_logical(label, modes, O)) for label in ("00", "01", "10", "11")}
    assert len(parities) == 1


def test_logical_state_is_stationary(off_ideal):
    O, modes = off_ideal
    for label in ("00", "+"):
        state = init_logical(label, modes, O)
        assert np.allclose(evolve_state(state, O), state, atol=1e-8)


def test_plus_state_pairs_across_the_chain(ideal):
    O, modes = ideal
    state = init_logical("+", modes, O)
    assert np.isclose(correlation(state, modes.mode("zero1_left"), modes.mode("zero1_right")), 1)
    assert np.isclose(correlation(state, modes.mode("zero1_left"), modes.mode("zero2_left")), 0)


def test_init_rejects_unpinned_modes(off_ideal):
    O, _ = off_ideal
    modes = edge_modes(floquet_propagator(DriveParams.ideal(12)))
    with pytest.raises(IncompatibleModes):
        init_logical("00", modes, O)


def test_evolution_preserves_purity(off_ideal):
    O, modes = off_ideal
    state = CovarianceState.vacuum(12)
    for _ in range(5):
        state = evolve_state(state, O)
    assert state.is_pure()
    assert total_parity(state) == 1


def test_forced_measurement_branches(ideal):
    O, modes = ideal
    state = init_logical("+", modes, O)
    a, b = modes.mode("zero1_left"), modes.mode("zero2_left")
    for outcome in (1, -1):
        record, after = measure_parity(state, a, b, force=outcome)
        assert record.forced and record.outcome == outcome
        assert np.isclose(record.probability, 0.5)
        assert np.isclose(correlation(after, a, b), outcome)
        assert after.is_pure()


def test_zero_probability_branch(ideal):
    O, modes = ideal
    state = init_logical("00", modes, O)
    with pytest.raises(ZeroProbabilityBranch):
        measure_parity(state, modes.mode("zero1_left"), modes.mode("zero2_left"), force=-1)


def test_measurement_needs_orthonormal_pair(ideal):
    O, modes = ideal
    state = init_logical("00", modes, O)
    a = modes.mode("zero1_left")
    with pytest.raises(IncompatibleModes):
        measure_parity(state, a, a)


def test_parity_probability(ideal):
    O, modes = ideal
    state = init_logical("10", modes, O)
    a, b = modes.mode("zero1_left"), modes.mode("zero2_left")
    assert np.isclose(parity_probability(state, a, b, -1), 1.0)
    assert np.isclose(parity_probability(state, a, b, 1), 0.0)


def test_seeded_outcomes_are_reproducible(ideal):
    O, modes = ideal
    state = init_logical("+", modes, O)
    a, b = modes.mode("zero1_left"), modes.mode("zero2_left")
    first = [measure_parity(state, a, b, rng=rng)[0].outcome for rng in spawn_rngs(11, 20)]
    second = [measure_parity(state, a, b, rng=rng)[0].outcome for rng in spawn_rngs(11, 20)]
    assert first == second
    assert set(first) == {1, -1}


def test_make_rng_passes_generators_through():
    rng = make_rng(3)
    assert make_rng(rng) is rng


def test_rotation_by_pi_moves_between_logical_states(ideal):
    O, modes = ideal
    state = rotate_pair(init_logical("00", modes, O), modes.mode("zero1_left"), modes.mode("pi_left"), np.pi)
    assert np.allclose(state, init_logical("10", modes, O), atol=1e-12)


@pytest.mark.parametrize("label", ["00", "+"])
def test_prepare_ancilla_by_measurement(ideal, label):
    O, modes = ideal
    state, record = prepare_ancilla(init_logical(label, modes, O), modes, method="measure", rng=5)
    assert record is not None
    assert np.isclose(correlation(state, modes.mode("zero1_left"), modes.mode("zero2_left")), -1)


def test_prepare_ancilla_direct(ideal):
    O, modes = ideal
    state, record = prepare_ancilla(init_logical("01", modes, O), modes)
    assert record is None
    assert np.isclose(correlation(state, modes.mode("zero1_left"), modes.mode("zero2_left")), -1)
    assert np.isclose(correlation(state, modes.mode("zero1_right"), modes.mode("zero2_right")), -1)
    with pytest.raises(InvalidParameters):
        prepare_ancilla(state, modes, method="teleport")


def test_snapshot_round_trip(tmp_path, off_ideal):
    O, modes = off_ideal
    state = init_logical("11", modes, O)
    save_state(state, tmp_path / "snapshot", metadata={"label": "11"})
    loaded = load_state(tmp_path / "snapshot")
    assert np.array_equal(loaded, state)
    assert loaded.N == 12
    assert (tmp_path / "snapshot.json").exists()
