"""
Caching utilities for the Kummer/Enriques verifier.
Memoizes the expensive exact constructions (tables, frames, calibrations),
which are pure and immutable and therefore safe to share between checks.
"""

import functools
import hashlib
import threading
from collections import OrderedDict
from typing import Any, Callable, Dict, Optional


class LRUCache:
    """Thread-safe LRU cache"""

    def __init__(self, max_size: int = 100):
        self.max_size = max_size
        self._cache: "OrderedDict[str, Any]" = OrderedDict()
        self._lock = threading.RLock()
        self._hits = 0
        self._misses = 0

    def get(self, key: str) -> Optional[Any]:
        """Get value from cache"""
        with self._lock:
            if key not in self._cache:
                self._misses += 1
                return None

            # Move to end (most recently used)
            self._cache.move_to_end(key)
            self._hits += 1

            return self._cache[key]

    def put(self, key: str, value: Any) -> None:
        """Put value in cache"""
        with self._lock:
            self._cache[key] = value
            self._cache.move_to_end(key)

            while len(self._cache) > self.max_size:
                self._cache.popitem(last=False)  # Remove least recently used

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)

    def stats(self) -> Dict[str, Any]:
        """Get cache statistics"""
        with self._lock:
            total_requests = self._hits + self._misses
            hit_rate = self._hits / total_requests if total_requests > 0 else 0

            return {
                'size': len(self._cache),
                'max_size': self.max_size,
                'hits': self._hits,
                'misses': self._misses,
                'hit_rate': hit_rate,
                'total_requests': total_requests
            }


def make_key(kind: str, *parts: Any) -> str:
    """Stable cache key from a construction kind and its textual parameters"""
    key_data = ":".join([kind] + [str(part) for part in parts])
    return hashlib.md5(key_data.encode()).hexdigest()


def cache_result(
    cache_instance: LRUCache,
    key_func: Optional[Callable[..., str]] = None
):
    """Decorator to cache function results"""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            if key_func:
                key = key_func(*args, **kwargs)
            else:
                key = make_key(func.__qualname__, args, sorted(kwargs.items()))

            cached_result = cache_instance.get(key)
            if cached_result is not None:
                return cached_result

            result = func(*args, **kwargs)
            cache_instance.put(key, result)

            return result

        wrapper.cache = cache_instance
        return wrapper
    return decorator


# Global cache instance for exact constructions
construction_cache = LRUCache(max_size=64)


def get_cache_stats() -> Dict[str, Any]:
    """Get statistics for all caches"""
    return {
        'construction_cache': construction_cache.stats()
    }
