"""
Experiment subcommands: PSD comparison, memory and NOT-gate sweeps, optimization dumps.

Each sweep evaluates its grid points in a thread pool and returns a DataFrame
with one row per grid point in grid order.
"""

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from core.config import get_config
from core.constants import (
    FAILURES_JSON_FILENAME,
    OPTIMIZATION_JSON_FILENAME,
    TIME_SERIES_CSV_FILENAME,
    Subcommand,
    Target,
)
from core.dynamics.master import get_propagator, write_time_series_csv
from core.dynamics.operators import ket_projector
from core.exceptions import SweepFailedError
from core.experiments.cache import OptimizationCache
from core.experiments.config import (
    AlphaSweepConfig,
    DurationSweepConfig,
    MemorySweepConfig,
    NoiseSettings,
    NotSweepConfig,
    OptimizeRunConfig,
    PsdRunConfig,
    StrengthSweepConfig,
)
from core.fidelity.metrics import memory_fidelity, noisy_gate_fidelity, not_fidelity
from core.noise.builders import build_multistate_fluctuator, build_one_over_f_noise, build_rtn_ensemble
from core.noise.model import NoiseModel
from core.noise.spectrum import ideal_psd, log_log_slope, psd
from core.optimizer.model import OptimizationResult
from core.pulses.library import (
    corpse_identity,
    corpse_not,
    cpmg_block,
    pi_pulse,
    repeat,
    short_corpse_not,
    two_pi_pulse,
    zero_pulse,
)
from core.pulses.sequence import PulseSequence
from core.utils.error import SweepPointFailure

logger = logging.getLogger(__name__)

MEMORY_COLUMNS = ["two_pi", "corpse", "cpmg1", "cpmg2", "zero"]
NOT_COLUMNS = ["pi", "corpse", "short_corpse"]
_DURATION_TOL = 1e-9


def derive_seed(seed: int, name: str, index: Any) -> int:
    """
    Seed for one grid point: SHA-256 of "seed:name:index" truncated to 63 bits.

    index is the grid coordinate (e.g. tau_c), so a computation shared by
    two subcommands gets the same seed in both.
    """
    digest = hashlib.sha256(f"{seed}:{name}:{index!r}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def run_grid(
    command: str,
    parameters: Sequence[Any],
    evaluate: Callable[[int, Any], Dict[str, Any]],
    threads: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """
    Evaluate every grid point in parallel and return rows in grid order.

    Raises:
        SweepFailedError: If any grid point failed; raised after all points finish
    """
    workers = threads or get_config().default_threads
    rows: List[Optional[Dict[str, Any]]] = [None] * len(parameters)
    failures: List[SweepPointFailure] = []

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(evaluate, index, value) for index, value in enumerate(parameters)]
        for index, (value, future) in enumerate(zip(parameters, futures)):
            try:
                rows[index] = future.result()
                logger.info(f"{command}: point {index + 1}/{len(parameters)} done ({value!r})")
            except Exception as e:
                failure = SweepPointFailure.from_exception(command, index, value, e)
                logger.error(f"{command}: {failure}")
                failures.append(failure)

    if failures:
        summary = "; ".join(str(f) for f in failures[:3])
        raise SweepFailedError(
            f"{len(failures)} of {len(parameters)} grid points failed in {command}: {summary}", failures
        )
    return rows


def build_sweep_noise(
    noise: NoiseSettings, tau_c: float, strength: Optional[float] = None, alpha: Optional[float] = None
) -> NoiseModel:
    """1/f^alpha sweep model for one correlation time."""
    return build_one_over_f_noise(
        tau_c,
        m=noise.m,
        rate_span=noise.rate_span,
        alpha=noise.alpha if alpha is None else alpha,
        strength=noise.strength if strength is None else strength,
    )


def _fill(block: PulseSequence, T: float, padding: Optional[PulseSequence]) -> Optional[PulseSequence]:
    """Repeat block to fill T, topping up any remainder with padding repeats."""
    count = int(math.floor(T / block.duration + _DURATION_TOL))
    if count == 0:
        return None
    pulse = repeat(block, count)
    remainder = T - pulse.duration
    if remainder <= _DURATION_TOL * max(1.0, T):
        return pulse
    if padding is None:
        return None
    pad_count = remainder / padding.duration
    if abs(pad_count - round(pad_count)) > 1e-9 or round(pad_count) < 1:
        return None
    return pulse.concatenate(repeat(padding, int(round(pad_count))))


def memory_reference_pulses(T: float, padded: bool = False) -> Dict[str, PulseSequence]:
    """
    Reference identity sequences of total duration T.

    Blocks are repeated to fill T; with padded=True a remainder that is a
    multiple of 2 pi is filled with 2 pi pulses. Blocks that cannot fill T
    are omitted.
    """
    padding = two_pi_pulse() if padded else None
    blocks = {
        "two_pi": two_pi_pulse(),
        "corpse": corpse_identity(),
        "cpmg1": cpmg_block(math.pi),
        "cpmg2": cpmg_block(2 * math.pi),
    }
    pulses = {}
    for name, block in blocks.items():
        pulse = _fill(block, T, padding)
        if pulse is not None:
            pulses[name] = pulse
    pulses["zero"] = zero_pulse(T)
    return pulses


def not_reference_pulses() -> Dict[str, PulseSequence]:
    """pi pulse, CORPSE and short CORPSE, each at its own duration."""
    return {"pi": pi_pulse(), "corpse": corpse_not(), "short_corpse": short_corpse_not()}


def not_reference_starts(T: float) -> List[PulseSequence]:
    """NOT references no longer than T, padded with zero control up to T."""
    starts = []
    for pulse in not_reference_pulses().values():
        remainder = T - pulse.duration
        if remainder < -_DURATION_TOL * max(1.0, T):
            continue
        starts.append(pulse if remainder <= _DURATION_TOL * max(1.0, T) else pulse.concatenate(zero_pulse(remainder)))
    return starts


def reference_starts(target: str, T: float) -> List[PulseSequence]:
    if target == Target.NOT:
        return not_reference_starts(T)
    return [pulse for name, pulse in memory_reference_pulses(T, padded=True).items() if name != "zero"]


def _optimize_memory(
    cache: OptimizationCache, model: NoiseModel, T: float, settings, seed: int, index: Any
) -> OptimizationResult:
    config = settings.build(derive_seed(seed, Target.MEMORY, index))
    return cache.get_or_optimize(model, Target.MEMORY, T, config, reference_starts(Target.MEMORY, T))


def _frame(rows: List[Dict[str, float]], columns: List[str]) -> pd.DataFrame:
    return pd.DataFrame(rows).reindex(columns=columns)


def cmd_psd(config: PsdRunConfig) -> pd.DataFrame:
    """
    PSD of a K-fluctuator RTN ensemble, the multi-state fluctuator and A/f^alpha.

    Both models take rates uniform on [gamma0, rate_span gamma0]; the ensemble
    uses K = n_rtn sources with Delta_k = gamma_k^(-alpha/2).
    """
    g0 = config.gamma0
    size = 2 ** config.m
    delta = min((config.rate_span - 1.0) * g0 / (size - 2), g0)
    markov = build_multistate_fluctuator(config.m, g0, delta, config.alpha)
    rates = np.linspace(g0, config.rate_span * g0, config.n_rtn)
    ensemble = build_rtn_ensemble(rates ** (-config.alpha / 2.0), 1.0 / rates, alpha=config.alpha)

    f = np.logspace(math.log10(config.f_min), math.log10(config.f_max), config.n_points)
    frame = pd.DataFrame(
        {
            "f": f,
            f"S_rtn{config.n_rtn}": psd(ensemble, f),
            f"S_markov{size}": psd(markov, f),
            "S_ideal": ideal_psd(markov.A, config.alpha, f),
        }
    )

    low, high = config.slope_band
    band = np.logspace(math.log10(low * g0 / (2 * math.pi)), math.log10(high * g0 / (2 * math.pi)), 50)
    frame.attrs["slope_markov"] = log_log_slope(band, psd(markov, band))
    frame.attrs["slope_rtn"] = log_log_slope(band, psd(ensemble, band))
    logger.info(
        f"PSD slopes over {low:g} <= 2 pi f/gamma0 <= {high:g}: "
        f"markov {frame.attrs['slope_markov']:.4f}, rtn {frame.attrs['slope_rtn']:.4f}"
    )
    return frame


def cmd_memory_sweep(config: MemorySweepConfig, cache: Optional[OptimizationCache] = None) -> pd.DataFrame:
    """
    Memory fidelity at T = duration versus tau_c for the optimized and reference pulses.

    The optimized pulse is found at base_duration and repeated to fill duration;
    optimized_base reports its fidelity at base_duration.
    """
    cache = cache or OptimizationCache()
    repeats = int(round(config.duration / config.base_duration))
    references = memory_reference_pulses(config.duration)

    def evaluate(index: int, tau_c: float) -> Dict[str, float]:
        model = build_sweep_noise(config.noise, tau_c)
        result = _optimize_memory(cache, model, config.base_duration, config.optimizer, config.seed, tau_c)
        row = {
            "tau_c": tau_c,
            "optimized": memory_fidelity(model, repeat(result.pulse, repeats)),
            "optimized_base": memory_fidelity(model, result.pulse),
        }
        for name, pulse in references.items():
            row[name] = memory_fidelity(model, pulse)
        return row

    rows = run_grid(Subcommand.MEMORY_SWEEP, config.tau_c, evaluate, config.threads)
    return _frame(rows, ["tau_c", "optimized", "optimized_base"] + MEMORY_COLUMNS)


def cmd_duration_sweep(config: DurationSweepConfig, cache: Optional[OptimizationCache] = None) -> pd.DataFrame:
    """Optimized memory fidelity versus operation time at fixed tau_c."""
    cache = cache or OptimizationCache()
    model = build_sweep_noise(config.noise, config.tau_c)

    def evaluate(index: int, T: float) -> Dict[str, float]:
        optimizer_config = config.optimizer.build(derive_seed(config.seed, Subcommand.DURATION_SWEEP, T))
        result = cache.get_or_optimize(
            model, Target.MEMORY, T, optimizer_config, reference_starts(Target.MEMORY, T)
        )
        return {"T": T, "optimized": memory_fidelity(model, result.pulse), "zero": memory_fidelity(model, zero_pulse(T))}

    rows = run_grid(Subcommand.DURATION_SWEEP, config.durations, evaluate, config.threads)
    return _frame(rows, ["T", "optimized", "zero"])


def cmd_strength_sweep(config: StrengthSweepConfig, cache: Optional[OptimizationCache] = None) -> pd.DataFrame:
    """Memory fidelity versus average noise strength <|eta|> at fixed tau_c."""
    cache = cache or OptimizationCache()
    repeats = int(round(config.duration / config.base_duration))
    references = memory_reference_pulses(config.duration)

    def evaluate(index: int, strength: float) -> Dict[str, float]:
        model = build_sweep_noise(config.noise, config.tau_c, strength=strength)
        optimizer_config = config.optimizer.build(derive_seed(config.seed, Subcommand.STRENGTH_SWEEP, strength))
        result = cache.get_or_optimize(
            model, Target.MEMORY, config.base_duration, optimizer_config,
            reference_starts(Target.MEMORY, config.base_duration),
        )
        row = {
            "strength": strength,
            "optimized": memory_fidelity(model, repeat(result.pulse, repeats)),
            "optimized_base": memory_fidelity(model, result.pulse),
        }
        for name, pulse in references.items():
            row[name] = memory_fidelity(model, pulse)
        return row

    rows = run_grid(Subcommand.STRENGTH_SWEEP, config.strengths, evaluate, config.threads)
    return _frame(rows, ["strength", "optimized", "optimized_base"] + MEMORY_COLUMNS)


def alpha_column(alpha: float) -> str:
    return f"alpha_{alpha:g}"


def cmd_alpha_sweep(config: AlphaSweepConfig, cache: Optional[OptimizationCache] = None) -> pd.DataFrame:
    """Optimized memory fidelity at T = duration versus tau_c, one column per alpha."""
    cache = cache or OptimizationCache()
    points = [(tau_c, alpha) for tau_c in config.tau_c for alpha in config.alphas]

    def evaluate(index: int, point: Tuple[float, float]) -> Dict[str, float]:
        tau_c, alpha = point
        model = build_sweep_noise(config.noise, tau_c, alpha=alpha)
        # Same seed namespace as the memory sweep so alpha = 1 reproduces it
        result = _optimize_memory(cache, model, config.duration, config.optimizer, config.seed, tau_c)
        return {"tau_c": tau_c, "alpha": alpha, "value": memory_fidelity(model, result.pulse)}

    cells = run_grid(Subcommand.ALPHA_SWEEP, points, evaluate, config.threads)
    rows = []
    for i, tau_c in enumerate(config.tau_c):
        row = {"tau_c": tau_c}
        for j, alpha in enumerate(config.alphas):
            row[alpha_column(alpha)] = cells[i * len(config.alphas) + j]["value"]
        rows.append(row)
    return _frame(rows, ["tau_c"] + [alpha_column(a) for a in config.alphas])


def _optimize_not(
    cache: OptimizationCache, model: NoiseModel, T: float, settings, seed: int, segments_per_pi: int, index: Any
) -> OptimizationResult:
    optimizer_config = settings.build(derive_seed(seed, Target.NOT, index), default_segments_per_pi=segments_per_pi)
    return cache.get_or_optimize(model, Target.NOT, T, optimizer_config, reference_starts(Target.NOT, T))


def cmd_not_sweep(config: NotSweepConfig, cache: Optional[OptimizationCache] = None) -> pd.DataFrame:
    """NOT-gate fidelity versus tau_c for the pi pulse, CORPSE, short CORPSE and the optimized pulse."""
    cache = cache or OptimizationCache()
    references = not_reference_pulses()

    def evaluate(index: int, tau_c: float) -> Dict[str, float]:
        model = build_sweep_noise(config.noise, tau_c)
        result = _optimize_not(
            cache, model, config.duration, config.optimizer, config.seed, config.segments_per_pi, tau_c
        )
        row = {"tau_c": tau_c, "optimized": not_fidelity(model, result.pulse)}
        for name, pulse in references.items():
            row[name] = not_fidelity(model, pulse)
        return row

    rows = run_grid(Subcommand.NOT_SWEEP, config.tau_c, evaluate, config.threads)
    return _frame(rows, ["tau_c", "optimized"] + NOT_COLUMNS)


def cmd_optimize(config: OptimizeRunConfig, cache: Optional[OptimizationCache] = None) -> List[Dict[str, Any]]:
    """
    One optimization per tau_c with the full result.

    Returns:
        List of {"tau_c", "noise", "fidelity", "result"} records in grid order
    """
    cache = cache or OptimizationCache()
    segments_per_pi = config.grid_segments_per_pi()

    def evaluate(index: int, tau_c: float) -> Dict[str, Any]:
        model = build_sweep_noise(config.noise, tau_c)
        if config.target == Target.NOT:
            result = _optimize_not(
                cache, model, config.duration, config.optimizer, config.seed, segments_per_pi, tau_c
            )
        else:
            optimizer_config = config.optimizer.build(
                derive_seed(config.seed, Target.MEMORY, tau_c), default_segments_per_pi=segments_per_pi
            )
            result = cache.get_or_optimize(
                model, Target.MEMORY, config.duration, optimizer_config,
                reference_starts(Target.MEMORY, config.duration),
            )
        return {
            "tau_c": tau_c,
            "noise": model.to_dict(),
            "fidelity": noisy_gate_fidelity(model, result.pulse, config.target),
            "result": result,
            "model": model,
        }

    return run_grid(Subcommand.OPTIMIZE, config.tau_c, evaluate, config.threads)


def write_frame(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write a sweep table as CSV with full float precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def failure_report_path(output: Union[str, Path]) -> Path:
    """Failure report location for an output CSV (next to it) or output directory (inside it)."""
    output = Path(output)
    if output.suffix:
        return output.with_name(f"{output.stem}_{FAILURES_JSON_FILENAME}")
    return output / FAILURES_JSON_FILENAME


def write_failure_report(command: str, failures: Sequence[SweepPointFailure], path: Union[str, Path]) -> Path:
    """Write the failed grid points of one run as JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"command": command, "failures": [failure.to_dict() for failure in failures]}
    path.write_text(json.dumps(document, indent=2, default=str))
    logger.info(f"Wrote {len(failures)} failure records to {path}")
    return path


def read_failure_report(path: Union[str, Path]) -> List[SweepPointFailure]:
    document = json.loads(Path(path).read_text())
    return [SweepPointFailure.from_dict(record) for record in document.get("failures", [])]


def write_optimization_dump(records: List[Dict[str, Any]], directory: Union[str, Path]) -> Path:
    """
    Write optimization.json plus, per tau_c, the pulse CSV and its time series from |0>.

    Returns:
        Path of the JSON document
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    runs = []
    for index, record in enumerate(records):
        result: OptimizationResult = record["result"]
        pulse_path = result.pulse.to_csv(directory / f"pulse_{index}.csv")
        states = get_propagator(record["model"]).time_series(result.pulse, ket_projector(0))
        series_path = write_time_series_csv(states, directory / f"tau_{index}_{TIME_SERIES_CSV_FILENAME}")
        runs.append(
            {
                "tau_c": record["tau_c"],
                "noise": record["noise"],
                "fidelity": record["fidelity"],
                "pulse_csv": pulse_path.name,
                "time_series_csv": series_path.name,
                "result": result.to_dict(),
            }
        )
    path = directory / OPTIMIZATION_JSON_FILENAME
    path.write_text(json.dumps({"runs": runs}, indent=2))
    logger.info(f"Wrote {len(runs)} optimization results to {path}")
    return path
