import json
import math

import numpy as np
import pandas as pd
import pytest

from core.constants import ExitCode, Subcommand
from core.exceptions import NumericalError, SweepFailedError
from core.experiments import (
    OptimizationCache,
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
    read_failure_report,
    write_frame,
    write_optimization_dump,
)
from core.experiments import cli
from core.experiments.commands import MEMORY_COLUMNS, NOT_COLUMNS, run_grid
from core.experiments.config import (
    AlphaSweepConfig,
    DurationSweepConfig,
    MemorySweepConfig,
    NoiseSettings,
    NotSweepConfig,
    OptimizeRunConfig,
    OptimizerSettings,
    PsdRunConfig,
    StrengthSweepConfig,
)
from core.fidelity import memory_fidelity
from core.noise import build_one_over_f_noise
from core.pulses import two_pi_pulse

PI = math.pi

DESK_NOISE = {"m": 3, "rate_span": 7.0}
TINY_OPTIMIZER = {"n_starts": 1, "max_iterations": 5}


def tiny_memory_config(**overrides) -> MemorySweepConfig:
    settings = {
        "tau_c": [3.0, 30.0],
        "noise": DESK_NOISE,
        "optimizer": TINY_OPTIMIZER,
        "duration": 4 * PI,
        "base_duration": 2 * PI,
        "threads": 2,
    }
    settings.update(overrides)
    return MemorySweepConfig(**settings)


def test_derive_seed_is_stable_and_distinct():
    seed = derive_seed(0, "memory", 3.0)
    assert seed == derive_seed(0, "memory", 3.0)
    assert 0 <= seed < 2 ** 63
    others = {derive_seed(1, "memory", 3.0), derive_seed(0, "not", 3.0), derive_seed(0, "memory", 30.0)}
    assert seed not in others
    assert len(others) == 3


def test_run_grid_keeps_grid_order():
    rows = run_grid("square", [3, 1, 2], lambda index, value: {"index": index, "square": value ** 2}, threads=3)
    assert rows == [{"index": 0, "square": 9}, {"index": 1, "square": 1}, {"index": 2, "square": 4}]


def test_run_grid_aggregates_failures():
    def evaluate(index, value):
        if value < 0:
            raise ValueError("negative")
        return {"value": value}

    with pytest.raises(SweepFailedError, match="2 of 4 grid points failed in check") as raised:
        run_grid("check", [1.0, -1.0, 2.0, -2.0], evaluate, threads=2)

    assert isinstance(raised.value, NumericalError)
    assert [(f.index, f.parameter, f.error_type) for f in raised.value.failures] == [
        (1, -1.0, "ValueError"),
        (3, -2.0, "ValueError"),
    ]


def test_psd_table():
    config = PsdRunConfig(m=3, rate_span=7.0, n_rtn=3, n_points=20)
    frame = cmd_psd(config)

    assert list(frame.columns) == ["f", "S_rtn3", "S_markov8", "S_ideal"]
    assert len(frame) == 20
    assert np.all(np.diff(frame["f"]) > 0)
    assert (frame.drop(columns="f") > 0).all().all()
    assert np.isfinite(frame.attrs["slope_markov"])
    assert np.isfinite(frame.attrs["slope_rtn"])
    assert frame.attrs["slope_markov"] < 0


def test_memory_reference_pulses_fill_the_duration():
    pulses = memory_reference_pulses(12 * PI)
    assert list(pulses) == MEMORY_COLUMNS
    for pulse in pulses.values():
        assert pulse.duration == pytest.approx(12 * PI)

    short = memory_reference_pulses(2 * PI)
    assert "corpse" not in short
    assert "corpse" in memory_reference_pulses(6 * PI, padded=True)


def test_memory_sweep(result_cache):
    config = tiny_memory_config()
    frame = cmd_memory_sweep(config, result_cache)

    assert list(frame.columns) == ["tau_c", "optimized", "optimized_base"] + MEMORY_COLUMNS
    assert frame["tau_c"].tolist() == [3.0, 30.0]
    # A 6 pi CPMG block cannot fill 4 pi
    assert frame["cpmg2"].isna().all()
    values = frame.drop(columns=["tau_c", "cpmg2"]).to_numpy()
    assert np.all((values >= 0.0) & (values <= 1.0))

    for tau_c, base in zip(frame["tau_c"], frame["optimized_base"]):
        model = build_one_over_f_noise(tau_c, m=3, rate_span=7.0)
        assert base >= memory_fidelity(model, two_pi_pulse()) - 1e-10

    assert list(result_cache.directory.glob("*.json"))


def test_cached_sweep_reproduces_fresh_sweep(result_cache):
    config = tiny_memory_config(tau_c=[10.0])
    fresh = cmd_memory_sweep(config, result_cache)
    result_cache.clear()
    cached = cmd_memory_sweep(config, result_cache)

    pd.testing.assert_frame_equal(fresh, cached, check_exact=True)
    assert len(list(result_cache.directory.glob("*.json"))) == 1


def test_not_sweep(result_cache):
    config = NotSweepConfig(tau_c=[30.0], noise=DESK_NOISE, optimizer=TINY_OPTIMIZER)
    frame = cmd_not_sweep(config, result_cache)

    assert list(frame.columns) == ["tau_c", "optimized"] + NOT_COLUMNS
    row = frame.iloc[0]
    assert row["corpse"] > row["pi"]
    assert 0.0 <= row["optimized"] <= 1.0


def test_optimization_dump(result_cache, tmp_path):
    config = OptimizeRunConfig(tau_c=[45.0], noise=DESK_NOISE, optimizer=TINY_OPTIMIZER)
    records = cmd_optimize(config, result_cache)
    path = write_optimization_dump(records, tmp_path / "optimize")

    document = json.loads(path.read_text())
    run = document["runs"][0]
    assert run["tau_c"] == 45.0
    assert len(run["result"]["segments"]) == 14
    assert run["fidelity"] == pytest.approx(records[0]["fidelity"])
    assert (tmp_path / "optimize" / run["pulse_csv"]).exists()
    series = pd.read_csv(tmp_path / "optimize" / run["time_series_csv"])
    assert len(series) == 15
    assert series["t"].iloc[-1] == pytest.approx(7 * PI / 3)


def test_write_frame_keeps_full_precision(tmp_path):
    frame = pd.DataFrame({"x": [1.0 / 3.0, PI]})
    path = write_frame(frame, tmp_path / "nested" / "table.csv")
    np.testing.assert_array_equal(pd.read_csv(path)["x"].to_numpy(), frame["x"].to_numpy())


@pytest.fixture
def memory_config_file(tmp_path):
    document = {
        "tau_c": [3.0, 30.0],
        "noise": DESK_NOISE,
        "optimizer": TINY_OPTIMIZER,
        "duration": 4 * PI,
        "base_duration": 2 * PI,
        "seed": 7,
    }
    path = tmp_path / "memory.json"
    path.write_text(json.dumps(document))
    return path


def test_cli_runs_are_byte_identical(memory_config_file, tmp_path):
    outputs = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        code = cli.main([Subcommand.MEMORY_SWEEP, "--config", str(memory_config_file), "--out", str(out), "--no-cache"])
        assert code == ExitCode.SUCCESS
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_cli_seed_override_changes_optimizer_seed(memory_config_file):
    config = cli.load_run_config(Subcommand.MEMORY_SWEEP, memory_config_file)
    overridden = cli.apply_overrides(Subcommand.MEMORY_SWEEP, config, seed=11, threads=3)
    assert (overridden.seed, overridden.threads) == (11, 3)
    assert cli.apply_overrides(Subcommand.MEMORY_SWEEP, config, None, None) is config


def test_cli_reports_configuration_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"tau_c": []}))
    out = tmp_path / "out.csv"

    assert cli.main([Subcommand.NOT_SWEEP, "--config", str(bad), "--out", str(out)]) == ExitCode.CONFIG_ERROR
    assert cli.main([Subcommand.PSD, "--config", str(tmp_path / "missing.json")]) == ExitCode.CONFIG_ERROR
    assert not out.exists()


def test_cli_reports_numerical_failures(monkeypatch, tmp_path):
    def failing_sweep(config, cache):
        raise NumericalError("1 of 1 grid points failed")

    monkeypatch.setitem(cli._SWEEPS, Subcommand.DURATION_SWEEP, failing_sweep)
    code = cli.main([Subcommand.DURATION_SWEEP, "--out", str(tmp_path / "out.csv"), "--no-cache"])
    assert code == ExitCode.NUMERICAL_FAILURE


def test_cli_writes_failed_grid_points_next_to_the_table(monkeypatch, tmp_path):
    def half_failing_sweep(config, cache):
        def evaluate(index, T):
            if index % 2:
                raise FloatingPointError(f"overflow at T={T}")
            return {"T": T}

        return pd.DataFrame(run_grid(Subcommand.DURATION_SWEEP, config.durations, evaluate, threads=2))

    monkeypatch.setitem(cli._SWEEPS, Subcommand.DURATION_SWEEP, half_failing_sweep)
    out = tmp_path / "sweeps" / "duration.csv"
    code = cli.main([Subcommand.DURATION_SWEEP, "--out", str(out), "--no-cache"])

    report = tmp_path / "sweeps" / "duration_failures.json"
    assert code == ExitCode.NUMERICAL_FAILURE
    assert failure_report_path(out) == report
    assert not out.exists()
    assert json.loads(report.read_text())["command"] == Subcommand.DURATION_SWEEP
    failures = read_failure_report(report)
    assert [f.index for f in failures] == list(range(1, len(DurationSweepConfig().durations), 2))
    assert failures[0].error_type == "FloatingPointError"
    assert failures[0].parameter == pytest.approx(DurationSweepConfig().durations[1])


def test_failure_report_sits_inside_output_directories(tmp_path):
    assert failure_report_path(tmp_path / "optimize") == tmp_path / "optimize" / "failures.json"


def test_cli_writes_psd_table(tmp_path):
    out = tmp_path / "psd.csv"
    assert cli.main([Subcommand.PSD, "--out", str(out)]) == ExitCode.SUCCESS
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["f", "S_rtn5", "S_markov32", "S_ideal"]
    assert len(frame) == 200


def test_parser_rejects_unknown_subcommand():
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["calibrate"])


def test_defaults_match_the_reference_experiments():
    config = MemorySweepConfig()
    assert len(config.tau_c) == 20
    assert config.tau_c[0] == pytest.approx(0.1)
    assert config.tau_c[-1] == pytest.approx(300.0)
    assert config.duration == pytest.approx(12 * PI)
    assert NotSweepConfig().duration == pytest.approx(7 * PI / 3)
    assert OptimizerSettings().build(seed=3).seed == 3
    assert NoiseSettings().m == 5


def test_duration_sweep(result_cache):
    config = DurationSweepConfig(tau_c=3.0, durations=[PI, 2 * PI], noise=DESK_NOISE, optimizer=TINY_OPTIMIZER)
    frame = cmd_duration_sweep(config, result_cache)

    assert list(frame.columns) == ["T", "optimized", "zero"]
    assert (frame["optimized"] >= frame["zero"] - 1e-10).all()


def test_strength_sweep_degrades_with_strength(result_cache):
    config = StrengthSweepConfig(
        tau_c=30.0, strengths=[0.05, 0.2], noise=DESK_NOISE, optimizer=TINY_OPTIMIZER,
        duration=4 * PI, base_duration=2 * PI,
    )
    frame = cmd_strength_sweep(config, result_cache)

    assert frame["strength"].tolist() == [0.05, 0.2]
    assert frame["zero"].iloc[0] > frame["zero"].iloc[1]
    assert frame["two_pi"].iloc[0] > frame["two_pi"].iloc[1]


def test_alpha_sweep_reproduces_memory_sweep_at_alpha_one(result_cache):
    alpha_config = AlphaSweepConfig(
        alphas=[1.0, 1.5], tau_c=[3.0], noise=DESK_NOISE, optimizer=TINY_OPTIMIZER, duration=2 * PI
    )
    memory_config = tiny_memory_config(tau_c=[3.0])
    alpha_frame = cmd_alpha_sweep(alpha_config, result_cache)
    memory_frame = cmd_memory_sweep(memory_config, OptimizationCache(enabled=False))

    assert list(alpha_frame.columns) == ["tau_c", "alpha_1", "alpha_1.5"]
    assert alpha_frame["alpha_1"].iloc[0] == memory_frame["optimized_base"].iloc[0]
