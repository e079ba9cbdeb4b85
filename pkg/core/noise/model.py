"""Data models for classical noise sources."""

import hashlib
import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from core.exceptions import NoiseModelError
from core.noise.generators import hadamard_generator, kronecker_sum_generator
from core.validators import validate_amplitudes, validate_generator, validate_positive


class Construction:
    """How a model's generator was assembled; drives JSON reconstruction."""
    HADAMARD = "hadamard"
    RTN_ENSEMBLE = "rtn_ensemble"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """
    M-state symmetric Markov noise source eta(t) with per-state amplitudes b_k.

    gamma[k, j] is the transition rate from state j to state k. Instances are
    validated on construction and their arrays are read-only.
    """

    gamma: np.ndarray
    b: np.ndarray
    alpha: Optional[float] = None
    gamma_grid: Tuple[float, ...] = field(default_factory=tuple)
    A: float = 1.0
    construction: str = Construction.CUSTOM

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float)
        b = np.array(self.b, dtype=float).reshape(-1)
        validate_generator(gamma)
        validate_amplitudes(b, gamma.shape[0])
        if self.alpha is not None and not 0.0 < float(self.alpha) < 2.0:
            raise NoiseModelError(f"alpha must lie in (0, 2), got {self.alpha}")
        validate_positive("A", float(self.A))
        grid = tuple(float(g) for g in self.gamma_grid)
        if any(not np.isfinite(g) or g <= 0 for g in grid):
            raise NoiseModelError("gamma_grid entries must be positive rates")

        gamma.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "gamma_grid", grid)
        object.__setattr__(self, "A", float(self.A))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def M(self) -> int:
        """Number of discrete noise states."""
        return int(self.gamma.shape[0])

    @property
    def mean_abs_amplitude(self) -> float:
        """Average noise strength <|eta|> under the uniform stationary law."""
        return float(np.mean(np.abs(self.b)))

    @property
    def is_noise_free(self) -> bool:
        return not np.any(self.b)

    @cached_property
    def fingerprint(self) -> str:
        """Stable content hash of (gamma, b), used as a cache key."""
        digest = hashlib.sha1()
        digest.update(np.ascontiguousarray(self.gamma).tobytes())
        digest.update(np.ascontiguousarray(self.b).tobytes())
        return digest.hexdigest()

    def with_amplitudes(self, b: np.ndarray, A: Optional[float] = None) -> "NoiseModel":
        """Copy of this model with new amplitudes (gamma unchanged)."""
        return replace(self, b=np.asarray(b, dtype=float), A=self.A if A is None else A)

    def describe(self) -> str:
        """Short human-readable descriptor for reports."""
        alpha = "-" if self.alpha is None else f"{self.alpha:g}"
        return f"{self.construction}(M={self.M}, alpha={alpha}, <|eta|>={self.mean_abs_amplitude:.6g})"

    def to_dict(self) -> dict:
        """
        Serialize to a JSON-compatible document.

        Gamma is reconstructed from gamma_grid for Hadamard and RTN-ensemble
        models and stored explicitly only for custom generators.
        """
        data = {
            "M": self.M,
            "alpha": self.alpha,
            "gamma_grid": list(self.gamma_grid),
            "b": self.b.tolist(),
            "A": self.A,
            "construction": self.construction,
        }
        if self.construction == Construction.CUSTOM:
            data["gamma"] = self.gamma.tolist()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        """Rebuild a model from to_dict output."""
        construction = data.get("construction", Construction.CUSTOM)
        grid = [float(g) for g in data.get("gamma_grid", [])]
        if construction == Construction.HADAMARD:
            gamma, _, _ = hadamard_generator(grid)
        elif construction == Construction.RTN_ENSEMBLE:
            gamma = kronecker_sum_generator(grid)
        elif "gamma" in data:
            gamma = np.asarray(data["gamma"], dtype=float)
        else:
            raise NoiseModelError(f"Cannot reconstruct generator for construction {construction!r}")

        if "M" in data and int(data["M"]) != gamma.shape[0]:
            raise NoiseModelError(
                f"Document declares M={data['M']} but its generator has {gamma.shape[0]} states"
            )
        return cls(
            gamma=gamma,
            b=np.asarray(data["b"], dtype=float),
            alpha=data.get("alpha"),
            gamma_grid=tuple(grid),
            A=float(data.get("A", 1.0)),
            construction=construction,
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "NoiseModel":
        return cls.from_dict(json.loads(text))
