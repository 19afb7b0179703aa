"""Clocks used for politeness delays and transcript timestamps."""

from __future__ import annotations

import threading
import time


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


class VirtualClock:
    """Deterministic clock: ``sleep`` advances time instantly.

    ``tick`` is added on every ``now()`` call so successive events get
    distinct, reproducible timestamps.
    """

    def __init__(self, start: float = 0.0, tick: float = 0.001):
        self._t = start
        self._tick = tick
        self._lock = threading.Lock()

    def now(self) -> float:
        with self._lock:
            self._t = round(self._t + self._tick, 9)
            return self._t

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            with self._lock:
                self._t = round(self._t + seconds, 9)
