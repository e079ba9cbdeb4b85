"""Two-level cache (memory + JSON files) for optimized pulses."""

import hashlib
import json
import logging
from pathlib import Path
from typing import Optional, Sequence, Union

from core.config import get_config
from core.fidelity.metrics import TargetLike
from core.noise.model import NoiseModel
from core.optimizer.grape import optimize
from core.optimizer.model import OptimizationResult, OptimizerConfig
from core.pulses.sequence import PulseSequence
from core.utils.cache import LRUCache

logger = logging.getLogger(__name__)


def optimization_key(
    model: NoiseModel,
    target: str,
    T: float,
    config: OptimizerConfig,
    extra_starts: Sequence[PulseSequence] = (),
) -> str:
    """SHA-256 over everything that determines an optimization result."""
    document = {
        "model": model.fingerprint,
        "target": target,
        "T": repr(float(T)),
        "config": config.cache_fields(),
        "extra_starts": [pulse.to_dict() for pulse in extra_starts],
    }
    return hashlib.sha256(json.dumps(document, sort_keys=True).encode()).hexdigest()


class OptimizationCache:
    """
    Memoizes optimize() results in an in-memory LRU backed by JSON documents.

    Documents are written to <directory>/<key>.json. Floats round-trip exactly
    through JSON, so cached results reproduce fresh ones bit for bit.
    """

    def __init__(self, directory: Optional[Union[str, Path]] = None, enabled: Optional[bool] = None, max_size: int = 256):
        app_config = get_config()
        self.directory = Path(directory) if directory is not None else app_config.cache_dir
        self.enabled = app_config.enable_result_cache if enabled is None else enabled
        self._memory: LRUCache[OptimizationResult] = LRUCache(max_size=max_size)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Optional[OptimizationResult]:
        if not self.enabled:
            return None
        result = self._memory.get(key)
        if result is not None:
            return result
        path = self._path(key)
        if not path.exists():
            return None
        try:
            result = OptimizationResult.from_dict(json.loads(path.read_text()))
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            return None
        self._memory.set(key, result)
        return result

    def set(self, key: str, result: OptimizationResult) -> None:
        if not self.enabled:
            return
        self._memory.set(key, result)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._path(key).write_text(json.dumps(result.to_dict()))

    def get_or_optimize(
        self,
        model: NoiseModel,
        target: TargetLike,
        T: float,
        config: OptimizerConfig,
        extra_starts: Sequence[PulseSequence] = (),
    ) -> OptimizationResult:
        """Cached optimize(); the key covers model, target, duration, config and starts."""
        label = target if isinstance(target, str) else "custom"
        key = optimization_key(model, label, T, config, extra_starts)
        cached = self.get(key) if isinstance(target, str) else None
        if cached is not None:
            logger.debug(f"Optimization cache hit {key[:12]}")
            return cached
        result = optimize(model, target, T, config, extra_starts)
        if isinstance(target, str):
            self.set(key, result)
        return result

    def clear(self) -> None:
        """Drop in-memory entries (files are left in place)."""
        self._memory.clear()
