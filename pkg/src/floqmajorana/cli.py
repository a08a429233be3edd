"""
Command-line front end.

Every subcommand writes its artifacts (CSV tables, JSON reports and the normalized run
configuration) into --out and prints a one-line summary. Exit codes: 0 success, 2 input or
usage error, 3 numerical-contract failure.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from ._version import __version__
from .config import RunConfig, configure_logging, write_json
from .evolve import MODE_NAMES, edge_modes, floquet_propagator, spectrum
from .exceptions import InvalidInputError, InvalidParameters, NumericalContractError
from .fockoracle import validate_against_oracle
from .lattice import DriveParams
from .logic import cnot_two_wire, gate_from_braid, readout, run_algorithm
from .protocols import braid_matrix, builtin_schedule, run, wilson_holonomy
from .topology import phase_diagram, winding_invariants

logger = logging.getLogger(__name__)

DEFAULT_SITES = 40
MAX_VALIDATE_SITES = 3
# CLI flag destinations stored in RunConfig.options
OPTION_KEYS = (
    "protocol", "M", "n", "f", "ramp", "grid", "steps", "sector", "samples",
    "axis", "start", "stop", "points", "mu1", "mu2", "name", "input", "backend",
    "force_outcomes", "periods", "n_loc", "draws", "trajectory",
)


def parse_outcomes(text):
    """'+-' -> (1, -1)."""
    if text is None:
        return None
    if len(text) != 2 or set(text) - {"+", "-"}:
        raise InvalidParameters(f"--force-outcomes takes two characters from '+-', got {text!r}")
    return tuple(1 if char == "+" else -1 for char in text)


def parse_steps(text):
    """'1,2,3' or 'step1,step2' -> list of step numbers or names."""
    if not text:
        return None
    return [int(item) if item.strip().isdigit() else item.strip() for item in text.split(",")]


def parse_algorithm_input(text):
    """'2' -> 2, '01' -> '01', '2,1' -> (2, 1) (Deutsch-Jozsa z and k)."""
    if text is None:
        raise InvalidParameters("algorithm needs --input")
    if "," in text:
        z, k = text.split(",", 1)
        return parse_algorithm_input(z), int(k)
    if len(text) == 2:
        return text
    try:
        return int(text)
    except ValueError as error:
        raise InvalidParameters(f"Cannot read algorithm input {text!r}") from error


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Run configuration or parameter-file JSON.")
    common.add_argument("--out", help="Output directory (default: current directory).")
    common.add_argument("--seed", type=int, help="Seed of every random draw.")
    common.add_argument("--sites", type=int, help=f"Sites per wire of the default ideal chain (default {DEFAULT_SITES}).")
    common.add_argument("--preset", choices=["ideal", "off_ideal"], default="ideal",
                        help="Default parameter set when --config is not given.")
    common.add_argument("--no-progress", action="store_true", help="Hide progress bars.")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug.")
    common.add_argument("--log-file", help="Also write the log to this file.")
    return common


def _schedule_arguments(parser):
    parser.add_argument("--protocol", help="Schedule name, e.g. braidA_left, braidB_right, tgate_left, readout.")
    parser.add_argument("--periods-per-step", dest="M", type=int, help="Even number of periods per step (default 400).")
    parser.add_argument("--n", type=int, help="Site offset of braidB and tgate (default 4).")
    parser.add_argument("--f", choices=["cos", "linear"], help="Shape of the every-other-period ramps.")
    parser.add_argument("--ramp", choices=["linear", "smoothstep"], help="Angle ramp of every step.")
    parser.add_argument("--steps", help="Comma-separated subset of steps (numbers or names).")


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="floqmajorana",
        description="Floquet Majorana superlattice: invariants, edge modes, braiding and logical gates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("spectrum", parents=[common], help="Open-boundary quasienergies.")
    sub.add_argument("--periods", type=int, choices=[1, 2], help="Spectrum of U (1) or U^2 (2).")
    sub.add_argument("--n-loc", dest="n_loc", type=int, help="Edge sites counted at each end.")

    sub = subparsers.add_parser("invariants", parents=[common], help="Zero and pi winding numbers.")
    sub.add_argument("--grid", type=int, help="k-points of the winding loop (default 512).")

    sub = subparsers.add_parser("phase-diagram", parents=[common], help="Invariants along one parameter axis.")
    sub.add_argument("--grid", type=int)
    sub.add_argument("--axis", default="j2", help="Uniform key, field name, mu1 or mu2.")
    sub.add_argument("--start", type=float, default=0.0)
    sub.add_argument("--stop", type=float, default=4 * np.pi)
    sub.add_argument("--points", type=int, default=41)

    subparsers.add_parser("edge-modes", parents=[common], help="Gauge-fixed edge Majoranas.")

    sub = subparsers.add_parser("braid", parents=[common], help="Run a braiding schedule.")
    _schedule_arguments(sub)
    sub.add_argument("--trajectory", action="store_true", help="Also write the per-period correlation table.")

    sub = subparsers.add_parser("holonomy", parents=[common], help="Wilson line of a closed schedule.")
    _schedule_arguments(sub)
    sub.add_argument("--sector", choices=["zero", "pi", "combined"])
    sub.add_argument("--samples", type=int, help="Samples per step.")

    sub = subparsers.add_parser("readout", parents=[common], help="Quasienergy offsets of the logical states.")
    sub.add_argument("--mu1", type=float, default=0.1)
    sub.add_argument("--mu2", type=float, default=0.05)

    sub = subparsers.add_parser("algorithm", parents=[common], help="Two-qubit search or Deutsch-Jozsa.")
    sub.add_argument("--name", choices=["search", "deutsch_jozsa"], default="search")
    sub.add_argument("--input", help="search: 0..3 (low bit = left qubit) or '01'; deutsch_jozsa: 'z' or 'z,k'.")
    sub.add_argument("--backend", choices=["logical_matrix", "gaussian_trajectory"])
    sub.add_argument("--periods-per-step", dest="M", type=int)
    sub.add_argument("--n", type=int)

    sub = subparsers.add_parser("cnot", parents=[common], help="Two-wire measurement-based CNOT.")
    sub.add_argument("--force-outcomes", dest="force_outcomes", help="Two outcomes such as '+-'.")

    sub = subparsers.add_parser("validate", parents=[common], help="Free-fermion layer against the Fock oracle.")
    sub.add_argument("--draws", type=int, help="Random parameter draws (default 10).")
    return parser


def config_from_args(args):
    """
    RunConfig from parsed arguments; flags override the options of a --config run file.
    """
    params, options, seed, out = None, {}, None, "."
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise InvalidParameters(f"Configuration file {path} not found")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise InvalidParameters(f"{path} is not valid JSON: {error}") from error
        if "command" in data:
            loaded = RunConfig.from_dict({**data, "command": args.command})
            params, options, seed, out = loaded.params, dict(loaded.options), loaded.seed, loaded.out
        else:
            params = DriveParams.from_dict(data)
    if params is None:
        sites = args.sites or DEFAULT_SITES
        params = DriveParams.off_ideal(sites) if args.preset == "off_ideal" else DriveParams.ideal(sites)
    for key in OPTION_KEYS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            options[key] = value
    if args.sites is not None:
        options["sites"] = args.sites
    return RunConfig(
        command=args.command,
        params=params,
        options=options,
        out=args.out or out,
        seed=args.seed if args.seed is not None else seed,
    )


def _schedule(config):
    schedule = builtin_schedule(
        config.option("protocol"), config.params,
        M=config.option("M"), n=config.option("n"), f=config.option("f"), ramp=config.option("ramp"),
    )
    steps = parse_steps(config.option("steps"))
    if steps:
        schedule = schedule.select(steps)
    return schedule


def cmd_spectrum(config, out, progress):
    O = floquet_propagator(config.params)
    report = spectrum(O, n_loc=config.option("n_loc", 4), periods=config.option("periods", 1),
                      N=config.params.N, wires=config.params.wires)
    report.to_csv(out / "spectrum.csv")
    counts = report.counts()
    return " ".join(f"{key}={value}" for key, value in counts.items())


def cmd_invariants(config, out, progress):
    result = winding_invariants(config.params, grid=config.option("grid"))
    payload = {
        "nu0": int(result.nu0),
        "nu_pi": int(result.nu_pi),
        "residuals": {key: float(value) for key, value in result.residuals.items()},
        "min_gap": result.min_gap,
    }
    write_json(payload, out / "invariants.json")
    return f"nu0={result.nu0} nu_pi={result.nu_pi}"


def cmd_phase_diagram(config, out, progress):
    values = np.linspace(config.option("start"), config.option("stop"), config.option("points"))
    frame = phase_diagram(config.params, config.option("axis"), values, grid=config.option("grid"), progress=progress)
    frame.to_csv(out / "phase_diagram.csv", index=False, float_format="%.12g")
    return f"{len(frame)} points, {int(frame['gap_flag'].sum())} gap-closed"


def cmd_edge_modes(config, out, progress):
    modes = edge_modes(floquet_propagator(config.params), N=config.params.N, wires=config.params.wires)
    pd.DataFrame(np.asarray(modes), columns=list(MODE_NAMES)).to_csv(out / "edge_modes.csv", index_label="majorana", float_format="%.12g")
    return f"splitting={modes.splitting:.3e}"


def cmd_braid(config, out, progress):
    schedule = _schedule(config)
    report = braid_matrix(schedule, progress=progress)
    payload = report.to_dict()
    payload["gate"] = gate_from_braid(report).to_dict()
    if config.option("trajectory"):
        trajectory = run(schedule, progress=progress)
        trajectory.to_csv(out / f"{schedule.name}_trajectory.csv")
        payload["metrics"] = trajectory.metrics
    write_json(payload, out / f"{schedule.name}_braid.json")
    block = np.round(report.block, 3).tolist()
    return f"{schedule.name}: block={block} leakage={report.leakage:.2e}"


def cmd_holonomy(config, out, progress):
    schedule = _schedule(config)
    result = wilson_holonomy(schedule, sector=config.option("sector", "zero"), samples=config.option("samples"), progress=progress)
    write_json(result.to_dict(), out / f"{schedule.name}_holonomy.json")
    return f"{schedule.name} {result.sector}: monodromy_distance={result.monodromy_distance:.3e}"


def cmd_readout(config, out, progress):
    report = readout(config.params, config.option("mu1"), config.option("mu2"))
    write_json(report.to_dict(), out / "readout.json")
    offsets = " ".join(f"{label}={value:+.6f}" for label, value in report.to_dict()["offsets"].items())
    return f"{offsets} distinct={report.all_distinct()}"


def cmd_algorithm(config, out, progress):
    backend = config.option("backend", "logical_matrix")
    params = config.params if backend == "gaussian_trajectory" else None
    result = run_algorithm(
        config.option("name"), parse_algorithm_input(config.option("input")), backend=backend, params=params,
        M=config.option("M"), n=config.option("n"), rng=config.seed, progress=progress,
    )
    (out / "algorithm.json").write_text(result.to_json() + "\n", encoding="utf-8")
    summary = f"{result.name} input={result.input} outcome={result.outcome}"
    if result.classification:
        summary += f" {result.classification}"
    return summary


def cmd_cnot(config, out, progress):
    report = cnot_two_wire(force=parse_outcomes(config.option("force_outcomes")), rng=config.seed)
    write_json(report.to_dict(), out / "cnot.json")
    table = " ".join(f"{label}->{output}" for label, output in report.outputs.items())
    if not report.is_cnot:
        raise NumericalContractError(f"Sequence does not act as CNOT: {table}")
    return f"{table} cnot=ok"


def cmd_validate(config, out, progress):
    sites = config.option("sites", 2)
    if sites > MAX_VALIDATE_SITES:
        raise InvalidParameters(f"validate runs at N <= {MAX_VALIDATE_SITES}, got {sites}")
    result = validate_against_oracle(N=sites, draws=config.option("draws", 10), rng=config.seed, progress=progress)
    write_json(result, out / "validate.json")
    if not result["passed"]:
        raise NumericalContractError(f"Free-fermion layer deviates from the oracle: {result}")
    return f"oracle agreement at N={sites}: propagator={result['propagator']:.1e} covariance={result['covariance']:.1e} measurement={result['measurement']:.1e}"


HANDLERS = {
    "spectrum": cmd_spectrum,
    "invariants": cmd_invariants,
    "phase-diagram": cmd_phase_diagram,
    "edge-modes": cmd_edge_modes,
    "braid": cmd_braid,
    "holonomy": cmd_holonomy,
    "readout": cmd_readout,
    "algorithm": cmd_algorithm,
    "cnot": cmd_cnot,
    "validate": cmd_validate,
}


def main(argv=None):
    """
    Parameters:
    - argv: list of arguments (default sys.argv[1:]).

    Returns:
    - int exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else 2
    configure_logging(args.verbose, args.log_file)

    try:
        config = config_from_args(args)
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        config.save(out / "run_config.json")
        summary = HANDLERS[args.command](config, out, not args.no_progress)
    except NumericalContractError as error:
        print(f"floqmajorana {args.command}: numerical contract failed: {error}", file=sys.stderr)
        return 3
    except np.linalg.LinAlgError as error:
        print(f"floqmajorana {args.command}: linear algebra failed: {error}", file=sys.stderr)
        return 3
    except (InvalidInputError, ValueError) as error:
        print(f"floqmajorana {args.command}: {error}", file=sys.stderr)
        return 2
    print(summary)
    return 0
