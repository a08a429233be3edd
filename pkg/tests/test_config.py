import json
import logging

import pytest

from floqmajorana.config import DEFAULT_OPTIONS, RunConfig, configure_logging, load_params, write_json
from floqmajorana.exceptions import InvalidParameters
from floqmajorana.lattice import DriveParams


def test_run_config_json_round_trip(tmp_path):
    config = RunConfig("braid", DriveParams.off_ideal(8), {"protocol": "braidB_left", "M": 200, "n": 2}, out="runs", seed=4)
    config.save(tmp_path / "run.json")
    loaded = RunConfig.load(tmp_path / "run.json")
    assert loaded.to_json() == config.to_json()
    assert loaded.params == config.params
    assert loaded.to_json().endswith("}\n")


def test_options_fall_back_to_defaults():
    config = RunConfig("braid", options={"M": 100, "n": None})
    assert config.option("M") == 100
    assert config.option("n") == DEFAULT_OPTIONS["n"]
    assert config.option("samples", 7) == 7
    assert "n" not in config.to_dict()["options"]


def test_unknown_command_rejected():
    with pytest.raises(InvalidParameters):
        RunConfig("teleport")
    with pytest.raises(InvalidParameters):
        RunConfig.from_dict({"params": None})
    with pytest.raises(TypeError):
        RunConfig("braid", params={"N": 4})


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(InvalidParameters):
        RunConfig.load(path)
    with pytest.raises(InvalidParameters):
        load_params(path)
    with pytest.raises(InvalidParameters):
        load_params(tmp_path / "absent.json")


def test_load_params_from_either_schema(tmp_path):
    params = DriveParams.off_ideal(5)
    write_json(params.to_dict(), tmp_path / "params.json")
    RunConfig("spectrum", params).save(tmp_path / "run.json")
    assert load_params(tmp_path / "params.json") == params
    assert load_params(tmp_path / "run.json") == params


def test_write_json_is_normalized(tmp_path):
    write_json({"b": 1, "a": [1, 2]}, tmp_path / "out.json")
    text = (tmp_path / "out.json").read_text()
    assert text == json.dumps({"a": [1, 2], "b": 1}, indent=2) + "\n"


@pytest.mark.parametrize("verbosity, level", [(0, logging.WARNING), (1, logging.INFO), (3, logging.DEBUG)])
def test_configure_logging_levels(verbosity, level):
    logger = configure_logging(verbosity)
    assert logger.level == level
    assert len(logger.handlers) == 1
