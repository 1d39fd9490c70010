"""
Performance metrics for verification runs.
Timings and process memory are collected on demand and logged; they never enter a report.
"""

import os
import threading
import time
from typing import Any, Dict, List

import psutil

from ..utils.logging_config import get_logger

logger = get_logger(__name__)


class PerformanceCounter:
    """Performance counter for tracking operations"""

    def __init__(self):
        self.count = 0
        self.failures = 0
        self.total_time = 0.0
        self.min_time = float('inf')
        self.max_time = 0.0
        self.lock = threading.Lock()

    def record(self, duration: float, failed: bool = False):
        """Record an operation duration"""
        with self.lock:
            self.count += 1
            self.failures += int(failed)
            self.total_time += duration
            self.min_time = min(self.min_time, duration)
            self.max_time = max(self.max_time, duration)

    def get_stats(self) -> Dict[str, float]:
        """Get performance statistics"""
        with self.lock:
            if self.count == 0:
                return {
                    'count': 0,
                    'failures': 0,
                    'average_time': 0.0,
                    'min_time': 0.0,
                    'max_time': 0.0,
                    'total_time': 0.0
                }

            return {
                'count': self.count,
                'failures': self.failures,
                'average_time': self.total_time / self.count,
                'min_time': self.min_time,
                'max_time': self.max_time,
                'total_time': self.total_time
            }


class MetricsCollector:
    """Counters per check plus process memory snapshots"""

    def __init__(self):
        self.counters: Dict[str, PerformanceCounter] = {}
        self.lock = threading.Lock()
        self.start_time = time.time()

    def record_counter(self, name: str, duration: float, failed: bool = False):
        with self.lock:
            counter = self.counters.setdefault(name, PerformanceCounter())
        counter.record(duration, failed)

    def snapshot(self) -> Dict[str, float]:
        """Resident and virtual memory of this process"""
        try:
            memory = psutil.Process(os.getpid()).memory_info()
        except psutil.Error as e:
            logger.warning("Could not read process memory", error=str(e))
            return {}
        return {'rss_bytes': float(memory.rss), 'vms_bytes': float(memory.vms)}

    def get_all_metrics(self) -> Dict[str, Any]:
        with self.lock:
            counters = dict(self.counters)
        return {
            'uptime': time.time() - self.start_time,
            'counters': {name: counter.get_stats() for name, counter in sorted(counters.items())}
        }

    def slowest(self, limit: int = 5) -> List[Dict[str, Any]]:
        stats = [
            {'name': name, **stats}
            for name, stats in self.get_all_metrics()['counters'].items()
        ]
        return sorted(stats, key=lambda s: s['max_time'], reverse=True)[:limit]

    def log_summary(self):
        metrics = self.get_all_metrics()
        logger.debug(
            "Run metrics",
            uptime=round(metrics['uptime'], 3),
            checks=len(metrics['counters']),
            slowest=[(s['name'], round(s['max_time'], 3)) for s in self.slowest()],
            **self.snapshot()
        )


# Global metrics collector instance
metrics_collector = MetricsCollector()


def record_performance(name: str, duration: float, failed: bool = False):
    """Convenience function to record performance"""
    metrics_collector.record_counter(name, duration, failed)


class performance_timer:
    """Context manager for timing operations"""

    def __init__(self, metric_name: str):
        self.metric_name = metric_name
        self.start_time = None
        self.duration = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is not None:
            self.duration = time.perf_counter() - self.start_time
            record_performance(self.metric_name, self.duration, failed=exc_type is not None)
