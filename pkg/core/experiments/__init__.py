"""Experiment drivers: sweeps, optimization dumps, run configs and the CLI."""

from core.experiments.cache import OptimizationCache, optimization_key
from core.experiments.commands import (
    cmd_alpha_sweep,
    cmd_duration_sweep,
    cmd_memory_sweep,
    cmd_not_sweep,
    cmd_optimize,
    cmd_psd,
    cmd_strength_sweep,
    derive_seed,
    failure_report_path,
    memory_reference_pulses,
    not_reference_pulses,
    read_failure_report,
    write_failure_report,
    write_frame,
    write_optimization_dump,
)
from core.experiments.config import load_run_config, parse_run_config

__all__ = [
    "OptimizationCache",
    "cmd_alpha_sweep",
    "cmd_duration_sweep",
    "cmd_memory_sweep",
    "cmd_not_sweep",
    "cmd_optimize",
    "cmd_psd",
    "cmd_strength_sweep",
    "derive_seed",
    "failure_report_path",
    "load_run_config",
    "memory_reference_pulses",
    "not_reference_pulses",
    "optimization_key",
    "parse_run_config",
    "read_failure_report",
    "write_failure_report",
    "write_frame",
    "write_optimization_dump",
]
