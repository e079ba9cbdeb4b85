"""Piecewise-constant control sequences."""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, NamedTuple, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from core.constants import DEFAULT_A_MAX
from core.exceptions import PulseError

CSV_COLUMNS = ["t_start", "t_end", "amplitude"]


class Segment(NamedTuple):
    """Constant control amplitude held for a duration."""

    amplitude: float
    duration: float


@dataclass(frozen=True, eq=False)
class PulseSequence:
    """
    Ordered control segments a(t) along x with |a| <= a_max.

    Durations are in dimensionless time t' = a_max t / hbar.
    """

    segments: Tuple[Segment, ...]
    a_max: float = DEFAULT_A_MAX
    label: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not math.isfinite(self.a_max) or self.a_max <= 0:
            raise PulseError(f"a_max must be positive, got {self.a_max}")
        segments = tuple(Segment(float(a), float(d)) for a, d in self.segments)
        if not segments:
            raise PulseError("A pulse sequence needs at least one segment")
        for index, (amplitude, duration) in enumerate(segments):
            if not (math.isfinite(amplitude) and math.isfinite(duration)):
                raise PulseError(f"Segment {index} has non-finite values")
            if duration <= 0:
                raise PulseError(f"Segment {index} has nonpositive duration {duration}")
            if abs(amplitude) > self.a_max:
                raise PulseError(
                    f"Segment {index} amplitude {amplitude} exceeds bound a_max={self.a_max}"
                )
        object.__setattr__(self, "segments", segments)

    def __len__(self) -> int:
        return len(self.segments)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PulseSequence):
            return NotImplemented
        return self.segments == other.segments and self.a_max == other.a_max

    def __hash__(self) -> int:
        return hash((self.segments, self.a_max))

    @property
    def duration(self) -> float:
        return float(math.fsum(s.duration for s in self.segments))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([s.amplitude for s in self.segments])

    @property
    def durations(self) -> np.ndarray:
        return np.array([s.duration for s in self.segments])

    @property
    def boundaries(self) -> np.ndarray:
        """Segment edges 0 = t_0 < t_1 < ... < t_n = duration."""
        return np.concatenate(([0.0], np.cumsum(self.durations)))

    def is_uniform(self, rtol: float = 1e-12) -> bool:
        """True when all segments share one duration."""
        durations = self.durations
        return bool(np.allclose(durations, durations[0], rtol=rtol, atol=0.0))

    def amplitude_at(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Control amplitude at time(s) t; t = duration maps to the last segment."""
        edges = self.boundaries
        index = np.clip(np.searchsorted(edges, np.asarray(t, dtype=float), side="right") - 1, 0, len(self) - 1)
        values = self.amplitudes[index]
        return float(values) if values.ndim == 0 else values

    def concatenate(self, *others: "PulseSequence") -> "PulseSequence":
        """This sequence followed by the others (all must share a_max)."""
        segments: List[Segment] = list(self.segments)
        for other in others:
            if other.a_max != self.a_max:
                raise PulseError("Cannot concatenate sequences with different a_max")
            segments.extend(other.segments)
        return PulseSequence(tuple(segments), self.a_max, label=self.label)

    def resample(self, n_segments: int) -> "PulseSequence":
        """
        Sample the amplitude at the midpoints of n equal segments.

        Exact when every original boundary falls on the new grid.
        """
        if n_segments < 1:
            raise PulseError(f"n_segments must be >= 1, got {n_segments}")
        step = self.duration / n_segments
        midpoints = (np.arange(n_segments) + 0.5) * step
        return uniform_pulse(self.amplitude_at(midpoints), self.duration, self.a_max, label=self.label)

    def aligns_with_grid(self, n_segments: int, tol: float = 1e-9) -> bool:
        """True when every boundary is a multiple of duration / n_segments."""
        ratio = self.boundaries / (self.duration / n_segments)
        return bool(np.all(np.abs(ratio - np.round(ratio)) <= tol))

    def to_dict(self) -> dict:
        return {
            "a_max": self.a_max,
            "label": self.label,
            "segments": [[s.amplitude, s.duration] for s in self.segments],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PulseSequence":
        try:
            segments = tuple(Segment(float(a), float(d)) for a, d in data["segments"])
        except (KeyError, TypeError, ValueError) as e:
            raise PulseError(f"Malformed pulse document: {e}") from e
        return cls(segments, float(data.get("a_max", DEFAULT_A_MAX)), label=data.get("label", "custom"))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "PulseSequence":
        return cls.from_dict(json.loads(text))

    def to_frame(self) -> pd.DataFrame:
        """Tabular form with columns (t_start, t_end, amplitude)."""
        edges = self.boundaries
        return pd.DataFrame(
            {"t_start": edges[:-1], "t_end": edges[1:], "amplitude": self.amplitudes},
            columns=CSV_COLUMNS,
        )

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path], a_max: float = DEFAULT_A_MAX) -> "PulseSequence":
        frame = pd.read_csv(path)
        missing = set(CSV_COLUMNS) - set(frame.columns)
        if missing:
            raise PulseError(f"Pulse CSV {path} is missing columns {sorted(missing)}")
        durations = frame["t_end"].to_numpy(float) - frame["t_start"].to_numpy(float)
        return cls(tuple(zip(frame["amplitude"].to_numpy(float), durations)), a_max, label=Path(path).stem)


def uniform_pulse(
    amplitudes: Iterable[float], T: float, a_max: float = DEFAULT_A_MAX, label: str = "custom"
) -> PulseSequence:
    """Equal-duration segments carrying the given amplitudes over total time T."""
    amplitudes = [float(a) for a in amplitudes]
    if not amplitudes:
        raise PulseError("uniform_pulse needs at least one amplitude")
    if not math.isfinite(T) or T <= 0:
        raise PulseError(f"Total duration must be positive, got {T}")
    step = T / len(amplitudes)
    return PulseSequence(tuple(Segment(a, step) for a in amplitudes), a_max, label=label)


def pulse_from_segments(segments: Sequence[Tuple[float, float]], a_max: float = DEFAULT_A_MAX, label: str = "custom") -> PulseSequence:
    """Build a sequence from (amplitude, duration) pairs."""
    return PulseSequence(tuple(Segment(float(a), float(d)) for a, d in segments), a_max, label=label)
