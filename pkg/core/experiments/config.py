"""Run configurations for the experiment subcommands."""

import json
import math
from pathlib import Path
from typing import Dict, List, Optional, Type, Union

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core.constants import (
    DEFAULT_LEVEL_EXPONENT,
    DEFAULT_RATE_SPAN,
    DEFAULT_STRENGTH,
    MEMORY_DURATION,
    NOT_DURATION,
    OPTIMIZED_MEMORY_DURATION,
    Subcommand,
    Target,
)
from core.exceptions import ConfigError
from core.optimizer.model import OptimizerConfig


def default_tau_grid() -> List[float]:
    """20 log-spaced correlation times in [0.1, 300]."""
    return np.logspace(math.log10(0.1), math.log10(300.0), 20).tolist()


def _positive_grid(values: List[float], name: str) -> List[float]:
    if not values:
        raise ValueError(f"{name} grid must not be empty")
    if any(not math.isfinite(v) or v <= 0 for v in values):
        raise ValueError(f"{name} grid entries must be positive and finite")
    return [float(v) for v in values]


def _whole_multiple(duration: float, base: float) -> float:
    repeats = duration / base
    if round(repeats) < 1 or abs(repeats - round(repeats)) > 1e-9:
        raise ValueError("duration must be an integer multiple of base_duration")
    return base


class NoiseSettings(BaseModel):
    """Parameters of the 1/f^alpha sweep noise."""

    model_config = ConfigDict(extra="forbid")

    m: int = Field(default=DEFAULT_LEVEL_EXPONENT, ge=2, le=8)
    rate_span: float = Field(default=DEFAULT_RATE_SPAN, gt=1)
    strength: float = Field(default=DEFAULT_STRENGTH, gt=0)
    alpha: float = Field(default=1.0, gt=0, lt=2)

    @field_validator("rate_span")
    @classmethod
    def validate_rate_span(cls, v: float, info) -> float:
        return cls.check_rate_span(v, info.data.get("m", DEFAULT_LEVEL_EXPONENT))

    @staticmethod
    def check_rate_span(rate_span: float, m: int) -> float:
        """gamma_max / gamma_min is at most M - 1 so that delta <= gamma_min."""
        if rate_span > 2 ** m - 1:
            raise ValueError(f"rate_span must not exceed {2 ** m - 1} for m={m}")
        return rate_span


class OptimizerSettings(BaseModel):
    """Optimizer overrides; unset fields take the application defaults."""

    model_config = ConfigDict(extra="forbid")

    n_starts: Optional[int] = Field(default=None, gt=0)
    max_iterations: Optional[int] = Field(default=None, gt=0)
    gradient_tolerance: Optional[float] = Field(default=None, gt=0)
    initial_step: Optional[float] = Field(default=None, gt=0)
    segments_per_pi: Optional[int] = Field(default=None, gt=0)
    include_reference_starts: bool = True
    n_workers: Optional[int] = Field(default=None, gt=0)

    def build(self, seed: int, default_segments_per_pi: Optional[int] = None) -> OptimizerConfig:
        values = self.model_dump(exclude_none=True)
        if "segments_per_pi" not in values and default_segments_per_pi is not None:
            values["segments_per_pi"] = default_segments_per_pi
        return OptimizerConfig(seed=seed, **values)


class RunConfig(BaseModel):
    """Fields shared by every subcommand."""

    model_config = ConfigDict(extra="forbid")

    seed: int = Field(default=0, ge=0)
    threads: Optional[int] = Field(default=None, gt=0)


class PsdRunConfig(RunConfig):
    gamma0: float = Field(default=1.0, gt=0)
    m: int = Field(default=DEFAULT_LEVEL_EXPONENT, ge=2, le=8)
    n_rtn: int = Field(default=5, ge=1, le=12)
    rate_span: float = Field(default=DEFAULT_RATE_SPAN, gt=1)
    alpha: float = Field(default=1.0, gt=0, lt=2)
    f_min: float = Field(default=1e-3, gt=0)
    f_max: float = Field(default=1e2, gt=0)
    n_points: int = Field(default=200, ge=2)
    slope_band: List[float] = Field(default_factory=lambda: [3.0, 16.0])

    @field_validator("rate_span")
    @classmethod
    def validate_rate_span(cls, v: float, info) -> float:
        return NoiseSettings.check_rate_span(v, info.data.get("m", DEFAULT_LEVEL_EXPONENT))

    @field_validator("f_max")
    @classmethod
    def validate_f_max(cls, v: float, info) -> float:
        if v <= info.data.get("f_min", 0.0):
            raise ValueError("f_max must exceed f_min")
        return v

    @field_validator("slope_band")
    @classmethod
    def validate_band(cls, v: List[float]) -> List[float]:
        if len(v) != 2 or not 0 < v[0] < v[1]:
            raise ValueError("slope_band must be [low, high] with 0 < low < high (units of gamma0)")
        return v


class MemorySweepConfig(RunConfig):
    tau_c: List[float] = Field(default_factory=default_tau_grid)
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    duration: float = Field(default=MEMORY_DURATION, gt=0)
    base_duration: float = Field(default=OPTIMIZED_MEMORY_DURATION, gt=0)

    @field_validator("tau_c")
    @classmethod
    def validate_tau(cls, v: List[float]) -> List[float]:
        return _positive_grid(v, "tau_c")

    @model_validator(mode="after")
    def validate_base(self) -> Self:
        _whole_multiple(self.duration, self.base_duration)
        return self


class DurationSweepConfig(RunConfig):
    tau_c: float = Field(default=3.0, gt=0)
    durations: List[float] = Field(default_factory=lambda: [k * math.pi for k in range(1, 9)])
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)

    @field_validator("durations")
    @classmethod
    def validate_durations(cls, v: List[float]) -> List[float]:
        return _positive_grid(v, "durations")


class StrengthSweepConfig(RunConfig):
    tau_c: float = Field(default=30.0, gt=0)
    strengths: List[float] = Field(default_factory=lambda: np.linspace(0.025, 0.6, 24).tolist())
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    duration: float = Field(default=MEMORY_DURATION, gt=0)
    base_duration: float = Field(default=OPTIMIZED_MEMORY_DURATION, gt=0)

    @field_validator("strengths")
    @classmethod
    def validate_strengths(cls, v: List[float]) -> List[float]:
        return _positive_grid(v, "strengths")

    @model_validator(mode="after")
    def validate_base(self) -> Self:
        _whole_multiple(self.duration, self.base_duration)
        return self


class AlphaSweepConfig(RunConfig):
    alphas: List[float] = Field(default_factory=lambda: [1.0, 1.25, 1.5, 1.75])
    tau_c: List[float] = Field(default_factory=default_tau_grid)
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    duration: float = Field(default=OPTIMIZED_MEMORY_DURATION, gt=0)

    @field_validator("alphas")
    @classmethod
    def validate_alphas(cls, v: List[float]) -> List[float]:
        if not v or any(not 0 < a < 2 for a in v):
            raise ValueError("alphas must be a nonempty list of values in (0, 2)")
        return [float(a) for a in v]

    @field_validator("tau_c")
    @classmethod
    def validate_tau(cls, v: List[float]) -> List[float]:
        return _positive_grid(v, "tau_c")


class NotSweepConfig(RunConfig):
    tau_c: List[float] = Field(default_factory=default_tau_grid)
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    duration: float = Field(default=NOT_DURATION, gt=0)
    segments_per_pi: int = Field(default=6, gt=0)

    @field_validator("tau_c")
    @classmethod
    def validate_tau(cls, v: List[float]) -> List[float]:
        return _positive_grid(v, "tau_c")


class OptimizeRunConfig(RunConfig):
    tau_c: List[float] = Field(default_factory=lambda: [45.0, 100.0, 150.0])
    target: str = Target.NOT
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    duration: float = Field(default=NOT_DURATION, gt=0)
    segments_per_pi: Optional[int] = Field(default=None, gt=0)

    @field_validator("tau_c")
    @classmethod
    def validate_tau(cls, v: List[float]) -> List[float]:
        return _positive_grid(v, "tau_c")

    @field_validator("target")
    @classmethod
    def validate_target(cls, v: str) -> str:
        if v not in (Target.MEMORY, Target.NOT):
            raise ValueError(f"target must be '{Target.MEMORY}' or '{Target.NOT}'")
        return v

    def grid_segments_per_pi(self) -> int:
        """NOT runs default to 6 segments per pi so pi/3 boundaries lie on the grid."""
        if self.segments_per_pi is not None:
            return self.segments_per_pi
        return 6 if self.target == Target.NOT else 4


CONFIG_MODELS: Dict[str, Type[RunConfig]] = {
    Subcommand.PSD: PsdRunConfig,
    Subcommand.MEMORY_SWEEP: MemorySweepConfig,
    Subcommand.DURATION_SWEEP: DurationSweepConfig,
    Subcommand.STRENGTH_SWEEP: StrengthSweepConfig,
    Subcommand.ALPHA_SWEEP: AlphaSweepConfig,
    Subcommand.NOT_SWEEP: NotSweepConfig,
    Subcommand.OPTIMIZE: OptimizeRunConfig,
}


def parse_run_config(subcommand: str, data: Optional[dict]) -> RunConfig:
    """
    Validate a configuration document for a subcommand.

    Raises:
        ConfigError: On unknown subcommands or schema violations
    """
    model = CONFIG_MODELS.get(subcommand)
    if model is None:
        raise ConfigError(f"Unknown subcommand {subcommand!r}")
    try:
        return model.model_validate(data or {})
    except ValidationError as e:
        raise ConfigError(f"Invalid {subcommand} configuration: {e}") from e


def load_run_config(subcommand: str, path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Load a JSON (or YAML) document from path, or defaults when path is None."""
    if path is None:
        return parse_run_config(subcommand, {})
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        text = path.read_text()
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot parse config {path}: {e}") from e
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"Config {path} must contain a mapping at the top level")
    return parse_run_config(subcommand, data)
