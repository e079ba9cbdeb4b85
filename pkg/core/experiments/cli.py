"""Command-line entry point for the experiment subcommands."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from core.config import get_config
from core.constants import ExitCode, Subcommand
from core.exceptions import ConfigError, SweepFailedError, WorkbenchError
from core.experiments.cache import OptimizationCache
from core.experiments.commands import (
    cmd_alpha_sweep,
    cmd_duration_sweep,
    cmd_memory_sweep,
    cmd_not_sweep,
    cmd_optimize,
    cmd_psd,
    cmd_strength_sweep,
    failure_report_path,
    write_failure_report,
    write_frame,
    write_optimization_dump,
)
from core.experiments.config import RunConfig, load_run_config, parse_run_config
from core.utils.infrastructure import log_command_summary, mlflow_run

logger = logging.getLogger(__name__)

_SWEEPS = {
    Subcommand.MEMORY_SWEEP: cmd_memory_sweep,
    Subcommand.DURATION_SWEEP: cmd_duration_sweep,
    Subcommand.STRENGTH_SWEEP: cmd_strength_sweep,
    Subcommand.ALPHA_SWEEP: cmd_alpha_sweep,
    Subcommand.NOT_SWEEP: cmd_not_sweep,
}

_HELP = {
    Subcommand.PSD: "PSD of the RTN ensemble, the multi-state fluctuator and A/f^alpha",
    Subcommand.MEMORY_SWEEP: "Memory fidelity vs correlation time for optimized and reference pulses",
    Subcommand.DURATION_SWEEP: "Optimized memory fidelity vs operation time",
    Subcommand.STRENGTH_SWEEP: "Memory fidelity vs average noise strength",
    Subcommand.ALPHA_SWEEP: "Optimized memory fidelity vs correlation time for several alpha",
    Subcommand.NOT_SWEEP: "NOT-gate fidelity vs correlation time",
    Subcommand.OPTIMIZE: "Full optimization dumps (JSON + pulse CSV) per correlation time",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="Run configuration (JSON or YAML)")
    common.add_argument("--out", type=Path, default=None, help="Output CSV (directory for optimize)")
    common.add_argument("--seed", type=int, default=None, help="Top-level seed (overrides config)")
    common.add_argument("--threads", type=int, default=None, help="Worker threads for grid points")
    common.add_argument("--log-level", default=None, help="Logging level (default from LOG_LEVEL)")
    common.add_argument("--no-cache", action="store_true", help="Disable the optimized-pulse cache")

    parser = argparse.ArgumentParser(
        prog="noise-workbench",
        description="Qubit control under 1/f noise: spectra, fidelity sweeps and pulse optimization.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in Subcommand.ALL:
        subparsers.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def configure_logging(level: Optional[str]) -> None:
    level_name = (level or get_config().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def apply_overrides(command: str, config: RunConfig, seed: Optional[int], threads: Optional[int]) -> RunConfig:
    """Re-validate the config with CLI overrides applied."""
    updates = {}
    if seed is not None:
        updates["seed"] = seed
    if threads is not None:
        updates["threads"] = threads
    if not updates:
        return config
    return parse_run_config(command, {**config.model_dump(), **updates})


def _frame_metrics(frame: pd.DataFrame) -> Dict[str, float]:
    metrics = {key: float(value) for key, value in frame.attrs.items()}
    metrics["rows"] = float(len(frame))
    return metrics


def output_path(command: str, out: Optional[Path]) -> Path:
    """--out, or the default under results_dir (a directory for optimize, a CSV otherwise)."""
    if out is not None:
        return out
    results_dir = get_config().results_dir
    return results_dir / command if command == Subcommand.OPTIMIZE else results_dir / f"{command}.csv"


def run_command(command: str, config: RunConfig, cache: OptimizationCache, out: Optional[Path]) -> Path:
    """Run one subcommand and write its outputs; returns the primary output path."""
    if command == Subcommand.OPTIMIZE:
        records = cmd_optimize(config, cache)
        path = write_optimization_dump(records, output_path(command, out))
        log_command_summary(
            config.model_dump(),
            {f"fidelity_{i}": record["fidelity"] for i, record in enumerate(records)},
        )
        return path

    if command == Subcommand.PSD:
        frame = cmd_psd(config)
    else:
        frame = _SWEEPS[command](config, cache)
    path = write_frame(frame, output_path(command, out))
    log_command_summary(config.model_dump(), _frame_metrics(frame))
    return path


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run the subcommand and map failures to exit codes.

    Returns:
        0 on success, 2 on configuration errors, 3 on numerical failures
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        config = apply_overrides(args.command, load_run_config(args.command, args.config), args.seed, args.threads)
        cache = OptimizationCache(enabled=False if args.no_cache else None)
        with mlflow_run(run_name=args.command):
            path = run_command(args.command, config, cache, args.out)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return ExitCode.CONFIG_ERROR
    except SweepFailedError as e:
        logger.error(f"Numerical failure in {args.command}: {e}")
        write_failure_report(args.command, e.failures, failure_report_path(output_path(args.command, args.out)))
        return ExitCode.NUMERICAL_FAILURE
    except (WorkbenchError, np.linalg.LinAlgError, FloatingPointError) as e:
        logger.error(f"Numerical failure in {args.command}: {type(e).__name__}: {e}")
        return ExitCode.NUMERICAL_FAILURE

    logger.info(f"{args.command} finished: {path}")
    return ExitCode.SUCCESS


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
