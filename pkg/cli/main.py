"""qcore command line: one subcommand per experiment kind plus figure presets."""
import argparse
import datetime
import logging
import sys
import time
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import ValidationError

from cli.outputs import SCHEMAS, write_outputs
from ensemble.config import ExperimentConfig, build_config, load_config, parse_level_ranges
from ensemble.figures import FIGURE_PRESETS, figure_driver, run_and_write
from ensemble.pipeline import theory_table
from qubit_lattice.errors import CapacityError
from shared_config import LOG_DIR, LOG_LEVEL

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3

SUBCOMMANDS = {
    "spectrum": ("spectrum", "Band spectrum E, E' and E/B of each realization."),
    "eta-scan": ("eta_scan", "Central-window eta against the coupling J."),
    "eta-energy": ("eta_vs_energy", "Eta in energy windows of the lower half band."),
    "ps-hist": ("ps_histogram", "Pooled spacing histogram P(s) with Poisson and Wigner-Dyson references."),
    "occupations": ("occupation_profile", "Site occupations and Fermi-Dirac fits of eigenstate ranges."),
    "sigma-scan": ("sigma_scan", "Central-window sigma_FD and sigma_s against J."),
    "sigma-energy": ("sigma_vs_energy", "sigma_FD and sigma_s against E/B."),
    "temps": ("temperature_comparison", "T_FD, T_can and T_th of every eigenstate."),
    "theory": ("theory", "Analytic chaos and thermalization scales."),
}


def setup_logging() -> str:
    """Log to logs/run_<timestamp>.log and the console."""
    log_dir = Path(LOG_DIR)
    log_dir.mkdir(parents=True, exist_ok=True)

    timestamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = log_dir / f"run_{timestamp}.log"

    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        handlers=[logging.FileHandler(log_file), logging.StreamHandler()],
    )

    # pandas pulls in numexpr, which logs its thread count at INFO
    logging.getLogger("numexpr").setLevel(logging.WARNING)

    return str(log_file)


def _float_list(raw: str) -> list[float]:
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{raw}'")


def _level_ranges(raw: str) -> list[tuple[int, int]]:
    try:
        return parse_level_ranges(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ranges like '5-10,95-100', got '{raw}'")


def _common_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    geometry = parser.add_argument_group("model")
    geometry.add_argument("--rows", type=int, help="Lattice rows")
    geometry.add_argument("--cols", type=int, help="Lattice columns")
    geometry.add_argument("--n", type=int, help="Qubit count; rows x cols from its most-square factorization")
    geometry.add_argument("--delta", type=float, help="Detuning width delta")
    geometry.add_argument("--delta0", type=float, help="Mean qubit spacing Delta_0 (projection check)")
    geometry.add_argument("--J", type=_float_list, help="Coupling amplitudes, comma separated")
    geometry.add_argument("--Jn", type=_float_list, help="Scaled couplings J n / delta, comma separated")
    geometry.add_argument("--dE", type=float, help="Excitation energy above the ground state (theory n_eff)")

    ensemble = parser.add_argument_group("ensemble")
    ensemble.add_argument("--seed", type=int, help="Base seed; realization r uses seed + r")
    ensemble.add_argument("--realizations", type=int, help="Number of disorder realizations")
    ensemble.add_argument("--threads", type=int, help="Worker processes (1 = serial)")
    ensemble.add_argument("--window", type=float, help="Central window fraction")
    ensemble.add_argument("--windows", type=int, help="Number of energy windows")
    ensemble.add_argument("--bin-width", type=float, help="P(s) bin width")
    ensemble.add_argument("--levels", type=_level_ranges, help="Level ranges, e.g. 5-10,95-100")
    ensemble.add_argument("--per-state", action="store_true", default=None, help="Fit each eigenstate separately")
    ensemble.add_argument("--stride", type=int, help="Analyze every stride-th eigenstate")
    ensemble.add_argument("--validate", action="store_true", default=None, help="Check H_P against the full H")

    solver = parser.add_argument_group("solver")
    solver.add_argument("--solver", choices=["auto", "dense", "iterative"], help="Eigensolver")
    solver.add_argument("--dense-cap", type=int, help="Largest band diagonalized densely")
    solver.add_argument("--k", type=int, help="Eigenpairs per band edge (iterative)")
    solver.add_argument("--side", choices=["lowest", "highest", "both"], help="Band edges (iterative)")
    solver.add_argument("--tol", type=float, help="Iterative residual tolerance")

    output = parser.add_argument_group("output")
    output.add_argument("--config", type=Path, help="key=value config file")
    output.add_argument("--out", help="Output directory")
    output.add_argument("--force", action="store_true", default=None, help="Overwrite existing outputs")
    return parser


_FLAG_FIELDS = {
    "rows": "rows",
    "cols": "cols",
    "n": "n_qubits",
    "delta": "delta",
    "delta0": "delta0",
    "J": "j_values",
    "Jn": "jn_values",
    "dE": "excitation",
    "seed": "base_seed",
    "realizations": "n_realizations",
    "threads": "threads",
    "window": "window_fraction",
    "windows": "n_windows",
    "bin_width": "bin_width",
    "levels": "level_ranges",
    "per_state": "per_state",
    "stride": "state_stride",
    "validate": "validate_projection",
    "solver": "solver",
    "dense_cap": "dense_cap",
    "k": "iterative_k",
    "side": "band_side",
    "tol": "tol",
    "out": "out_dir",
    "force": "force",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcore", description="Chaos and thermalization diagnostics of disordered qubit lattices"
    )
    common = _common_flags()
    commands = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in SUBCOMMANDS.items():
        commands.add_parser(name, parents=[common], help=help_text, description=help_text)
    figure = commands.add_parser("figure", parents=[common], help="Regenerate the data of a figure preset")
    figure.add_argument("figure_id", type=int, choices=sorted(FIGURE_PRESETS), help="Figure number")
    return parser


def flag_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Config fields set on the command line."""
    return {field: getattr(args, flag) for flag, field in _FLAG_FIELDS.items() if getattr(args, flag) is not None}


def _print_theory(table: pd.DataFrame) -> None:
    for J, group in table.groupby("J_over_delta", sort=False):
        print(f"\n--- Theory estimates at J/delta = {J:g} ---")
        for quantity, value in zip(group["quantity"], group["value"]):
            print(f"{quantity:>18} = {'n/a' if pd.isna(value) else value}")


def run_command(args: argparse.Namespace) -> None:
    file_layer = load_config(args.config) if args.config else {}
    flags = flag_overrides(args)

    if args.command == "figure":
        summary, paths = figure_driver(args.figure_id, {**file_layer, **flags})
        print(f"Figure {args.figure_id}: {summary.n_completed}/{summary.n_requested} realizations -> {paths[0]}")
        return

    kind, _ = SUBCOMMANDS[args.command]
    config: ExperimentConfig = build_config(file_layer, flags, {"kind": kind})
    prefix = f"run_{config.rows}x{config.cols}"

    if kind == "theory":
        start = time.perf_counter()
        table = theory_table(config)
        meta = {"config": config.echo(), "base_seed": config.base_seed, "wall_time_s": time.perf_counter() - start}
        write_outputs(table, SCHEMAS["theory"], config.out_dir, meta, force=config.force, prefix=prefix)
        _print_theory(table)
        return

    summary, paths = run_and_write(config, prefix=prefix)
    print(f"{args.command}: {summary.n_completed}/{summary.n_requested} realizations -> {paths[0]}")


def describe_error(e: Exception) -> str:
    """One-line diagnostic; validation errors name the offending fields."""
    if isinstance(e, ValidationError):
        return "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
    return str(e).splitlines()[0] if str(e) else type(e).__name__


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run the subcommand and map failures to exit codes.

    Returns:
        0 on success, 2 on usage errors, 3 on invalid parameters, 1 otherwise.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    log_file = setup_logging()
    logger.info(f"qcore {args.command} (log: {log_file})")
    try:
        run_command(args)
    except (ValueError, CapacityError) as e:
        logger.error(f"Invalid parameters: {e}")
        print(f"qcore: error: {type(e).__name__}: {describe_error(e)}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(f"qcore: error: {type(e).__name__}: {describe_error(e)}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
