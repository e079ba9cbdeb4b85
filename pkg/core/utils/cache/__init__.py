"""Caching utilities."""

from core.utils.cache.lru_cache import LRUCache

__all__ = ["LRUCache"]
