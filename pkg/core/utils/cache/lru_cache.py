"""LRU cache for propagators and optimization results."""

import threading
from collections import OrderedDict
from typing import Callable, Generic, Hashable, Optional, TypeVar

T = TypeVar('T')


class LRUCache(Generic[T]):
    """LRU cache with a size limit, hit/miss counters and thread safety."""

    def __init__(self, max_size: int = 1000):
        """
        Initialize LRU cache.

        Args:
            max_size: Maximum number of items to cache
        """
        if max_size < 1:
            raise ValueError(f"max_size must be at least 1, got {max_size}")
        self.cache: "OrderedDict[Hashable, T]" = OrderedDict()
        self.max_size = max_size
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[T]:
        """Get an item and mark it most recently used; None when absent."""
        with self._lock:
            if key in self.cache:
                self.cache.move_to_end(key)
                self.hits += 1
                return self.cache[key]
            self.misses += 1
        return None

    def set(self, key: Hashable, value: T) -> None:
        """Insert or replace an item, evicting the least recently used one when full."""
        with self._lock:
            if key in self.cache:
                self.cache.move_to_end(key)
            self.cache[key] = value
            if len(self.cache) > self.max_size:
                self.cache.popitem(last=False)

    def get_or_compute(self, key: Hashable, factory: Callable[[], T]) -> T:
        """
        Return the cached value for key, computing and storing it on a miss.

        The factory runs outside the lock; concurrent misses on the same key may
        both compute, and the last writer wins. Values are pure functions of the
        key so either result is correct.
        """
        value = self.get(key)
        if value is None:
            value = factory()
            self.set(key, value)
        return value

    def clear(self) -> None:
        """Clear all items and reset counters."""
        with self._lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self.cache)

    def __contains__(self, key: Hashable) -> bool:
        with self._lock:
            return key in self.cache
