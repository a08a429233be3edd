import json

import numpy as np
import pytest

from floqmajorana import cli
from floqmajorana.cli import main, parse_algorithm_input, parse_outcomes, parse_steps
from floqmajorana.exceptions import GapClosed, InvalidParameters
from floqmajorana.lattice import DriveParams


def _run(tmp_path, *argv):
    return main(list(argv) + ["--out", str(tmp_path), "--no-progress"])


def test_invariants_of_the_ideal_chain(tmp_path, capsys):
    assert _run(tmp_path, "invariants", "--sites", "10") == 0
    assert capsys.readouterr().out.strip() == "nu0=2 nu_pi=1"
    data = json.loads((tmp_path / "invariants.json").read_text())
    assert (data["nu0"], data["nu_pi"]) == (2, 1)
    assert (tmp_path / "run_config.json").exists()


def test_spectrum_writes_table(tmp_path, capsys):
    assert _run(tmp_path, "spectrum", "--sites", "10") == 0
    assert (tmp_path / "spectrum.csv").exists()
    assert "zero_left=2" in capsys.readouterr().out


def test_edge_modes_table(tmp_path):
    assert _run(tmp_path, "edge-modes", "--sites", "8") == 0
    header = (tmp_path / "edge_modes.csv").read_text().splitlines()[0]
    assert header.split(",")[1:] == ["zero1_left", "zero2_left", "pi_left", "pi_right", "zero1_right", "zero2_right"]


def test_open_braid_exits_with_input_error(tmp_path):
    code = _run(tmp_path, "braid", "--sites", "6", "--protocol", "braidA_left", "--periods-per-step", "10", "--steps", "1")
    assert code == 2


def test_odd_periods_per_step(tmp_path):
    assert _run(tmp_path, "braid", "--sites", "6", "--periods-per-step", "11") == 2


def test_unknown_command():
    assert main(["teleport"]) == 2


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "floqmajorana" in capsys.readouterr().out


def test_search_algorithm(tmp_path, capsys):
    assert _run(tmp_path, "algorithm", "--name", "search", "--input", "2") == 0
    assert "outcome=10" in capsys.readouterr().out
    assert json.loads((tmp_path / "algorithm.json").read_text())["outcome"] == "10"


def test_deutsch_jozsa_algorithm(tmp_path, capsys):
    assert _run(tmp_path, "algorithm", "--name", "deutsch_jozsa", "--input", "0,1") == 0
    assert capsys.readouterr().out.strip().endswith("constant")


def test_forced_cnot(tmp_path, capsys):
    assert _run(tmp_path, "cnot", "--force-outcomes", "+-") == 0
    assert "cnot=ok" in capsys.readouterr().out
    assert json.loads((tmp_path / "cnot.json").read_text())["is_cnot"]


def test_bad_forced_outcomes(tmp_path):
    assert _run(tmp_path, "cnot", "--force-outcomes", "+0") == 2


def test_validate_small_chain(tmp_path):
    assert _run(tmp_path, "validate", "--sites", "2", "--draws", "2", "--seed", "1") == 0
    assert json.loads((tmp_path / "validate.json").read_text())["passed"]


def test_validate_refuses_large_chain(tmp_path):
    assert _run(tmp_path, "validate", "--sites", "5") == 2


def test_readout(tmp_path, capsys):
    assert _run(tmp_path, "readout") == 0
    assert "distinct=True" in capsys.readouterr().out


def test_config_file_supplies_params(tmp_path, capsys):
    params_path = tmp_path / "params.json"
    params_path.write_text(json.dumps(DriveParams.off_ideal(12).to_dict()))
    assert _run(tmp_path, "invariants", "--config", str(params_path)) == 0
    assert capsys.readouterr().out.strip() == "nu0=2 nu_pi=1"
    saved = json.loads((tmp_path / "run_config.json").read_text())
    assert saved["params"]["N"] == 12


def test_missing_config_file(tmp_path):
    assert _run(tmp_path, "invariants", "--config", str(tmp_path / "absent.json")) == 2


def test_log_file(tmp_path):
    log = tmp_path / "run.log"
    assert _run(tmp_path, "invariants", "--sites", "6", "-v", "--log-file", str(log)) == 0
    assert "invariants.json" in log.read_text()


@pytest.mark.parametrize("text, expected", [("+-", (1, -1)), ("--", (-1, -1)), (None, None)])
def test_parse_outcomes(text, expected):
    assert parse_outcomes(text) == expected


def test_parse_steps():
    assert parse_steps("1, 2,step3") == [1, 2, "step3"]
    assert parse_steps("") is None


@pytest.mark.parametrize("text, expected", [("2", 2), ("01", "01"), ("2,1", (2, 1))])
def test_parse_algorithm_input(text, expected):
    assert parse_algorithm_input(text) == expected


def test_parse_algorithm_input_errors():
    with pytest.raises(InvalidParameters):
        parse_algorithm_input(None)
    with pytest.raises(InvalidParameters):
        parse_algorithm_input("abc")


@pytest.mark.parametrize(
    "error, code",
    [
        (np.linalg.LinAlgError("eig did not converge"), 3),
        (GapClosed("gap closed at k=0"), 3),
        (InvalidParameters("bad site"), 2),
    ],
)
def test_exit_codes_follow_the_failure_kind(tmp_path, monkeypatch, capsys, error, code):
    def failing(config, out, progress):
        raise error

    monkeypatch.setitem(cli.HANDLERS, "invariants", failing)
    assert _run(tmp_path, "invariants", "--sites", "6") == code
    assert str(error) in capsys.readouterr().err
