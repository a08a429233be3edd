import numpy as np
import pytest

from floqmajorana.evolve import MODE_NAMES, ZERO_MODES, floquet_propagator
from floqmajorana.exceptions import ClosureViolation, InvalidParameters, OddDuration, UnknownSchedule
from floqmajorana.lattice import DriveParams
from floqmajorana.logic import gate_from_braid, global_phase_distance, ideal_gate, ideal_transport
from floqmajorana.protocols import (
    BUILTIN_SCHEDULES,
    EVERY_OTHER_PERIOD,
    BraidBProtocol,
    Schedule,
    ScheduleStep,
    braid_matrix,
    builtin_schedule,
    displaced_params,
    ideal_patch,
    mirror_override,
    monodromy_distance,
    run,
    schedule_from_dict,
    start_modes,
    wilson_holonomy,
)


@pytest.fixture(scope="module")
def ideal6():
    return DriveParams.ideal(6)


def test_step_duration_must_be_even():
    with pytest.raises(OddDuration):
        ScheduleStep("odd", 3, lambda u: None)
    with pytest.raises(OddDuration):
        builtin_schedule("braidA_left", DriveParams.ideal(6), M=401)


def test_every_other_period_progress():
    step = ScheduleStep("slow", 4, lambda u: u, EVERY_OTHER_PERIOD)
    assert [step.progress(m) for m in range(1, 5)] == [0.5, 0.5, 1.0, 1.0]
    assert step.sample_points() == [0.5, 1.0]


def test_periods_share_params_within_a_pair(ideal6):
    schedule = builtin_schedule("braidB_left", ideal6, M=4, n=2)
    infos = [info for info in schedule.periods() if info.step_name == "step3"]
    assert len(infos) == 4
    assert infos[0].params is infos[1].params
    assert infos[1].params is not infos[2].params


@pytest.mark.parametrize("name", BUILTIN_SCHEDULES)
def test_builtin_schedules_are_closed(name, ideal6):
    schedule = builtin_schedule(name, ideal6, M=10, n=2)
    assert schedule.closed
    assert schedule.start_params.max_deviation(ideal6) <= 1e-12


def test_partial_schedule_is_not_closed(ideal6):
    schedule = builtin_schedule("braidA_left", ideal6, M=10).select([1])
    with pytest.raises(ClosureViolation):
        schedule.require_closed()
    with pytest.raises(ClosureViolation):
        braid_matrix(schedule, progress=False)


def test_select_validates_steps(ideal6):
    schedule = builtin_schedule("braidA_left", ideal6, M=10)
    with pytest.raises(InvalidParameters):
        schedule.select([7])
    with pytest.raises(InvalidParameters):
        schedule.select(["step9"])


def test_schedule_dict_round_trip(ideal6):
    schedule = builtin_schedule("braidB_right", ideal6, M=10, n=2).select([1, 2], name="braidB_right[1,2]")
    rebuilt = schedule_from_dict(schedule.to_dict(), ideal6)
    assert [step.name for step in rebuilt.steps] == ["step1", "step2"]
    assert rebuilt.options == schedule.options
    assert rebuilt.end_params == schedule.end_params


def test_unknown_schedule(ideal6):
    with pytest.raises(UnknownSchedule):
        builtin_schedule("braidC_left", ideal6)


def test_braid_b_needs_room():
    with pytest.raises(InvalidParameters):
        BraidBProtocol(DriveParams.ideal(8), n=4).build()
    with pytest.raises(InvalidParameters):
        BraidBProtocol(DriveParams.ideal(8), n=1).build()


@pytest.mark.parametrize(
    "entry, expected",
    [
        (("j_intra", 2, 1.5), ("j_intra", 9, 1.5)),
        (("J_inter", 1, 0.7), ("J_inter", 9, 0.7)),
        (("delta_inter", 1, 1j), ("delta_inter", 9, 1j)),
        (("delta_intra", 1, 2.0 + 1j), ("delta_intra", 10, -2.0 + 1j)),
        (("bias_a", 3, 0.4), ("bias_b", 8, -0.4)),
        (("mu1", None, 0.1), ("mu1", None, 0.1)),
    ],
)
def test_mirror_override(entry, expected):
    assert mirror_override(*entry, N=10) == expected


def test_rest_values_leave_params_unchanged(ideal6):
    params = displaced_params(ideal6, {("j_inter", 1): 2 * np.pi, ("J_intra", 2): np.pi / 2})
    assert params.max_deviation(ideal6) == 0.0
    with pytest.raises(InvalidParameters):
        displaced_params(ideal6, {("j_inter", 7): 0.0})


def test_displacements_follow_the_base(ideal6):
    base = ideal6.with_bias(3, 0.2)
    params = displaced_params(base, {("bias_a", 1): 1.0})
    assert np.isclose(params.bias_a[0], 1.0)
    assert np.isclose(params.bias_a[2], 0.2)



def test_ideal_patch_fine_tunes_both_edges():
    base = DriveParams.off_ideal(20)
    left = ideal_patch(base, 8, "left")
    assert np.allclose(left.J_intra[:8], np.pi / 2)
    assert np.allclose(left.j_inter[:8], 2 * np.pi)
    assert np.allclose(left.delta_intra[:8], 0.0)
    assert left.J_intra[8] == base.J_intra[8]
    right = ideal_patch(base, 8, "right")
    assert np.allclose(right.Delta_intra[12:], np.pi / 2)
    assert np.allclose(right.j_inter[11:19], 2 * np.pi)
    assert right.J_inter[10] == base.J_inter[10]
    assert ideal_patch(DriveParams.ideal(20), 8, "right") == DriveParams.ideal(20)


def test_off_ideal_base_adds_entry_and_exit_ramps():
    base = DriveParams.off_ideal(20)
    schedule = builtin_schedule("braidA_left", base, M=10)
    assert [step.name for step in schedule.steps] == ["enter"] + [f"step{k}" for k in range(1, 7)] + ["exit"]
    assert schedule.closed
    assert schedule.start_params == base
    assert len(schedule.lead_in) == 1
    working_point = ideal_patch(base, 8, "left")
    assert schedule.steps[0].curve(1.0).max_deviation(working_point) < 1e-12
    assert schedule.steps[1].curve(0.0).max_deviation(working_point) < 1e-12


@pytest.mark.parametrize("u", [0.0, 0.3, 0.7, 1.0])
def test_step5_pairing_follows_hopping_at_off_ideal_base(u):
    schedule = builtin_schedule("braidA_left", DriveParams.off_ideal(20), M=10)
    params = schedule.steps[5].curve(u)
    assert schedule.steps[5].name == "step5"
    assert np.isclose(params.delta_inter[0], -params.j_inter[0])


def test_fine_tuned_edge_needs_no_entry_ramp():
    base = DriveParams.ideal(20).with_bias(15, 0.3)
    schedule = builtin_schedule("braidB_left", base, M=10, n=2)
    assert "enter" not in [step.name for step in schedule.steps]
    assert not schedule.lead_in


def test_start_modes_are_pinned_at_off_ideal_base():
    base = DriveParams.off_ideal(20)
    schedule = builtin_schedule("braidA_left", base, M=20)
    modes = np.asarray(start_modes(schedule))
    O = np.asarray(floquet_propagator(base))
    signs = np.array([-1.0 if name.startswith("pi") else 1.0 for name in MODE_NAMES])
    assert np.allclose(modes.T @ modes, np.eye(6), atol=1e-10)
    assert np.allclose(O @ modes, modes * signs, atol=1e-8)

def test_frozen_run_keeps_correlations(ideal6):
    trajectory = run(Schedule.frozen(ideal6, 4), progress=False)
    assert len(trajectory.frame) == 4
    assert np.isclose(trajectory.correlation("zero1_left", "zero1_right"), 1.0)
    assert np.isclose(trajectory.correlation("pi_right", "pi_left"), 1.0)
    assert np.isclose(trajectory.correlation("pi_left", "pi_right"), -1.0)
    assert trajectory.final_state.is_pure()
    assert trajectory.metrics["diabatic_error"] < 1e-8


def test_trajectory_csv(tmp_path, ideal6):
    trajectory = run(Schedule.frozen(ideal6, 2), progress=False)
    trajectory.to_csv(tmp_path / "trajectory.csv")
    header = (tmp_path / "trajectory.csv").read_text().splitlines()[0]
    assert header.startswith("period,step,u")
    assert "zero1_left|zero2_left" in header


def test_braid_a_exchanges_left_zero_modes(ideal6):
    report = braid_matrix(builtin_schedule("braidA_left", ideal6, M=400), progress=False)
    assert report.active_modes == ("zero1_left", "zero2_left")
    assert np.allclose(report.block, [[0, 1], [-1, 0]], atol=1e-2)
    assert np.allclose(report.block_power(4), np.eye(2), atol=5e-2)
    assert report.leakage < 1e-2
    assert global_phase_distance(gate_from_braid(report), ideal_gate("braidA", "left")) < 5e-2


def test_braid_b_exchanges_pi_and_zero2(ideal6):
    report = braid_matrix(builtin_schedule("braidB_left", ideal6, M=400, n=2), progress=False)
    assert report.active_modes == ("pi_left", "zero2_left")
    assert np.allclose(report.block, [[0, -1], [1, 0]], atol=5e-2)
    assert global_phase_distance(gate_from_braid(report), ideal_gate("braidB", "left")) < 5e-2


def test_right_transports_are_mirrored():
    active, block = ideal_transport("braidA", "right")
    assert active == ("zero2_right", "zero1_right")
    assert np.allclose(block, [[0, 1], [-1, 0]])
    active, block = ideal_transport("braidB", "right")
    assert active == ("pi_right", "zero1_right")
    assert np.allclose(block, [[0, 1], [-1, 0]])


def test_monodromy_distance():
    assert monodromy_distance(np.array([[0, -1], [1, 0]])) == 0.0
    rotation = np.array([[1, -1], [1, 1]]) / np.sqrt(2)
    assert monodromy_distance(rotation) > 0.5


def test_zero_sector_holonomy_of_braid_a(ideal6):
    result = wilson_holonomy(builtin_schedule("braidA_left", ideal6, M=100), "zero", progress=False)
    assert result.unitarity_error() < 1e-8
    assert result.monodromy_distance < 1e-2
    right = [ZERO_MODES.index("zero1_right"), ZERO_MODES.index("zero2_right")]
    assert np.allclose(np.abs(result.W[np.ix_(right, right)]), np.eye(2), atol=1e-6)
    left = [ZERO_MODES.index("zero1_left"), ZERO_MODES.index("zero2_left")]
    assert np.allclose(np.abs(result.W[np.ix_(left, left)]), [[0, 1], [1, 0]], atol=1e-2)


def test_holonomy_matches_signed_braid_matrix(ideal6):
    schedule = builtin_schedule("braidA_left", ideal6, M=400)
    result = wilson_holonomy(schedule, "zero", samples=200, progress=False)
    report = braid_matrix(schedule, progress=False)
    zero = [MODE_NAMES.index(name) for name in ZERO_MODES]
    assert np.allclose(result.W, report.full[np.ix_(zero, zero)], atol=1e-2)
    assert result.monodromy_distance < 1e-2


def test_holonomy_rejects_unknown_sector(ideal6):
    with pytest.raises(InvalidParameters):
        wilson_holonomy(builtin_schedule("braidA_left", ideal6, M=10), "bulk", progress=False)


@pytest.mark.slow
def test_tgate_squares_to_braid_b():
    params = DriveParams.ideal(10)
    report = braid_matrix(builtin_schedule("tgate_left", params, M=400, n=4), progress=False)
    gate = gate_from_braid(report)
    assert global_phase_distance(gate.power(2), ideal_gate("braidB", "left")) < 5e-2


@pytest.fixture(scope="module")
def off_ideal40():
    return DriveParams.off_ideal(40)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["braidA_left", "braidA_right", "braidB_left", "braidB_right"])
def test_braids_at_desk_scale_off_ideal(name, off_ideal40):
    protocol, side = name.split("_")
    report = braid_matrix(builtin_schedule(name, off_ideal40, M=400, n=4), progress=False)
    active, block = ideal_transport(protocol, side)
    assert report.active_modes == active
    assert np.allclose(report.block, block, atol=1e-3)
    assert report.leakage < 1e-3
    assert global_phase_distance(gate_from_braid(report), ideal_gate(protocol, side)) < 1e-2


@pytest.mark.slow
def test_braid_a_correlations_off_ideal(off_ideal40):
    trajectory = run(builtin_schedule("braidA_left", off_ideal40, M=400), progress=False)
    assert abs(trajectory.correlation("zero1_left", "zero2_right")) >= 0.999
    assert abs(trajectory.correlation("zero2_left", "zero1_right")) >= 0.999
    assert trajectory.metrics["diabatic_error"] <= 1e-3


@pytest.mark.slow
def test_braid_b_correlations_off_ideal(off_ideal40):
    trajectory = run(builtin_schedule("braidB_left", off_ideal40, M=400, n=4, f="cos"), progress=False)
    assert abs(abs(trajectory.correlation("pi_right", "zero2_left")) - 1) <= 1e-3
    assert abs(abs(trajectory.correlation("pi_left", "zero2_right")) - 1) <= 1e-3
    assert trajectory.metrics["diabatic_error"] <= 1e-3


@pytest.mark.slow
def test_braid_b_keeps_edge_modes_pinned():
    trajectory = run(builtin_schedule("braidB_left", DriveParams.ideal(40), M=400, n=4), progress=False)
    assert trajectory.metrics["max_splitting"] <= 1e-6
