"""Constants shared across the workbench."""

import math

# Units: hbar = 1 and a_max = 1; times in hbar/a_max, rates in a_max/hbar
DEFAULT_A_MAX = 1.0

# Tolerances
ALGEBRA_TOLERANCE = 1e-10
GENERATOR_TOLERANCE = 1e-12
FIDELITY_TOLERANCE = 1e-9

# Noise defaults for the sweep experiments
DEFAULT_LEVEL_EXPONENT = 5  # M = 2^5 = 32 states
DEFAULT_RATE_SPAN = 30.0
DEFAULT_STRENGTH = 0.125
DESK_LEVEL_EXPONENT = 3
DESK_RATE_SPAN = 7.0

# Reference operation times
MEMORY_DURATION = 12 * math.pi
OPTIMIZED_MEMORY_DURATION = 6 * math.pi
NOT_DURATION = 7 * math.pi / 3

# Monte Carlo
MIN_TRAJECTORIES = 100
DEFAULT_MC_SHARDS = 8


class Target:
    """Gate target labels."""
    MEMORY = "memory"
    NOT = "not"


class Subcommand:
    """CLI subcommand names."""
    PSD = "psd"
    MEMORY_SWEEP = "memory-sweep"
    DURATION_SWEEP = "duration-sweep"
    STRENGTH_SWEEP = "strength-sweep"
    ALPHA_SWEEP = "alpha-sweep"
    NOT_SWEEP = "not-sweep"
    OPTIMIZE = "optimize"

    ALL = (PSD, MEMORY_SWEEP, DURATION_SWEEP, STRENGTH_SWEEP, ALPHA_SWEEP, NOT_SWEEP, OPTIMIZE)


class ExitCode:
    """Process exit codes of the CLI."""
    SUCCESS = 0
    CONFIG_ERROR = 2
    NUMERICAL_FAILURE = 3


# Output filenames
OPTIMIZATION_JSON_FILENAME = "optimization.json"
TIME_SERIES_CSV_FILENAME = "time_series.csv"
FAILURES_JSON_FILENAME = "failures.json"
