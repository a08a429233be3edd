import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from .exceptions import InvalidParameters
from .lattice import DriveParams

logger = logging.getLogger(__name__)

COMMANDS = (
    "spectrum", "invariants", "phase-diagram", "edge-modes", "braid",
    "holonomy", "readout", "algorithm", "cnot", "validate",
)
DEFAULT_OPTIONS = {
    "protocol": "braidA_left",
    "M": 400,
    "n": 4,
    "f": "cos",
    "ramp": "linear",
    "grid": 512,
}
LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"


@dataclass
class RunConfig:
    """
    Everything a CLI run depends on: command, drive parameters, schedule options, outputs, seed.
    """
    command: str
    params: Optional[DriveParams] = None
    options: Dict[str, object] = field(default_factory=dict)
    out: str = "."
    seed: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidParameters(f"Unknown command {self.command!r}. Choose from {COMMANDS}.")
        if self.params is not None and not isinstance(self.params, DriveParams):
            raise TypeError("params must be a DriveParams instance")

    def option(self, key, default=None):
        if key in self.options and self.options[key] is not None:
            return self.options[key]
        return DEFAULT_OPTIONS.get(key, default)

    def to_dict(self):
        return {
            "command": self.command,
            "params": self.params.to_dict() if self.params is not None else None,
            "options": {key: value for key, value in self.options.items() if value is not None},
            "out": self.out,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data):
        """
        Parameters:
        - data: dict with "command" and optionally "params" (parameter-file schema), "options", "out", "seed".

        Returns:
        - RunConfig instance.
        """
        if "command" not in data:
            raise InvalidParameters("Run configuration needs a 'command' entry.")
        params = data.get("params")
        return cls(
            command=data["command"],
            params=DriveParams.from_dict(params) if params is not None else None,
            options=dict(data.get("options") or {}),
            out=data.get("out", "."),
            seed=data.get("seed"),
        )

    def to_json(self):
        """Normalized JSON text: sorted keys, two-space indent, trailing newline."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise InvalidParameters(f"Run configuration is not valid JSON: {error}") from error
        return cls.from_dict(data)

    def save(self, path):
        Path(path).write_text(self.to_json(), encoding="utf-8")
        logger.info("Wrote run configuration to %s", path)

    @classmethod
    def load(cls, path):
        path = Path(path)
        if not path.exists():
            raise InvalidParameters(f"Configuration file {path} not found")
        return cls.from_json(path.read_text(encoding="utf-8"))


def load_params(path):
    """DriveParams from a parameter file, or from the "params" entry of a run configuration."""
    path = Path(path)
    if not path.exists():
        raise InvalidParameters(f"Parameter file {path} not found")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise InvalidParameters(f"{path} is not valid JSON: {error}") from error
    if "command" in data:
        data = data.get("params") or {}
    return DriveParams.from_dict(data)


def write_json(data, path):
    Path(path).write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote %s", path)


def configure_logging(verbosity=0, file=None):
    """
    Attach handlers to the package logger once.

    Parameters:
    - verbosity: 0 warnings, 1 info, 2 or more debug.
    - file: optional path of an additional log file.
    """
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    package = logging.getLogger("floqmajorana")
    for handler in list(package.handlers):
        package.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    package.addHandler(handler)
    if file is not None:
        file_handler = logging.FileHandler(file)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        package.addHandler(file_handler)
    package.setLevel(level)
    return package
