"""Configuration and result models for pulse optimization."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from core.config import get_config
from core.constants import DEFAULT_A_MAX
from core.pulses.sequence import PulseSequence


class Termination:
    """Reasons an ascent stopped."""
    GRADIENT_TOLERANCE = "gradient_tolerance"
    MAX_ITERATIONS = "max_iterations"
    STEP_UNDERFLOW = "step_underflow"


def default_segment_count(T: float, segments_per_pi: Optional[int] = None) -> int:
    """Uniform-grid size for duration T: segments_per_pi segments per pi of duration."""
    per_pi = segments_per_pi or get_config().optimizer.segments_per_pi
    return max(1, int(round(T / math.pi * per_pi)))


class OptimizerConfig(BaseModel):
    """Settings for a multistart gradient-ascent run."""

    n_segments: Optional[int] = Field(
        default=None, gt=0, description="Number of equal segments; None derives it from the duration"
    )
    max_iterations: int = Field(default_factory=lambda: get_config().optimizer.max_iterations, gt=0)
    gradient_tolerance: float = Field(default_factory=lambda: get_config().optimizer.gradient_tolerance, gt=0)
    initial_step: float = Field(default_factory=lambda: get_config().optimizer.initial_step, gt=0)
    n_starts: int = Field(default_factory=lambda: get_config().optimizer.n_starts, gt=0)
    seed: int = Field(default=0, ge=0)
    amplitude_bound: float = Field(default=DEFAULT_A_MAX, gt=0)
    segments_per_pi: int = Field(default_factory=lambda: get_config().optimizer.segments_per_pi, gt=0)
    min_step: float = Field(default=1e-12, gt=0)
    include_reference_starts: bool = Field(
        default=True, description="Also start from the zero pulse and from constant a_max"
    )
    n_workers: Optional[int] = Field(default=None, gt=0)

    @field_validator("min_step")
    @classmethod
    def validate_min_step(cls, v: float) -> float:
        if v >= 1.0:
            raise ValueError("min_step must be below 1")
        return v

    def segments_for(self, T: float) -> int:
        return self.n_segments or default_segment_count(T, self.segments_per_pi)

    def cache_fields(self) -> Dict[str, Any]:
        """Fields that determine the result (worker count excluded)."""
        return self.model_dump(exclude={"n_workers"})


@dataclass
class OptimizationResult:
    """Best pulse found by an ascent together with its history."""

    pulse: PulseSequence
    fidelity: float
    iterations: int
    start_index: int
    fidelity_trace: List[float] = field(default_factory=list)
    converged: bool = False
    termination: str = Termination.MAX_ITERATIONS
    target: str = ""
    start_fidelities: List[float] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def initial_fidelity(self) -> float:
        return self.fidelity_trace[0] if self.fidelity_trace else self.fidelity

    def to_dict(self) -> dict:
        """JSON document {config, fidelity, segments, trace, ...}."""
        return {
            "config": self.config,
            "target": self.target,
            "fidelity": self.fidelity,
            "iterations": self.iterations,
            "start_index": self.start_index,
            "converged": self.converged,
            "termination": self.termination,
            "a_max": self.pulse.a_max,
            "segments": [[s.amplitude, s.duration] for s in self.pulse.segments],
            "trace": list(self.fidelity_trace),
            "start_fidelities": list(self.start_fidelities),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizationResult":
        pulse = PulseSequence.from_dict(
            {"segments": data["segments"], "a_max": data.get("a_max", DEFAULT_A_MAX), "label": "optimized"}
        )
        return cls(
            pulse=pulse,
            fidelity=float(data["fidelity"]),
            iterations=int(data.get("iterations", 0)),
            start_index=int(data.get("start_index", 0)),
            fidelity_trace=[float(v) for v in data.get("trace", [])],
            converged=bool(data.get("converged", False)),
            termination=data.get("termination", Termination.MAX_ITERATIONS),
            target=data.get("target", ""),
            start_fidelities=[float(v) for v in data.get("start_fidelities", [])],
            config=dict(data.get("config", {})),
        )
