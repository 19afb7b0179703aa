"""Per-host minimum spacing between requests."""

from __future__ import annotations

import logging
import threading

from ..clock import SystemClock

logger = logging.getLogger(__name__)

# transcripts round timestamps to the microsecond; this keeps rounded gaps >= delay
_HEADROOM = 2e-6


class HostThrottle:
    """Block until ``delay_ms`` has passed since the last request to a host.

    One throttle may be shared by several browser sessions (e.g. successive
    benchmark runs) so spacing also holds across session boundaries.
    """

    def __init__(self, delay_ms: int = 2000, clock=None):
        if delay_ms < 0:
            raise ValueError("delay_ms must be non-negative")
        self.delay_ms = delay_ms
        self.clock = clock or SystemClock()
        self._last: dict[str, float] = {}
        self._lock = threading.Lock()

    def wait(self, host: str) -> float:
        """Sleep as needed, record and return the request time for ``host``."""
        delay = self.delay_ms / 1000.0
        with self._lock:
            last = self._last.get(host)
            now = self.clock.now()
            while last is not None and now - last < delay + _HEADROOM:
                remaining = delay + _HEADROOM - (now - last)
                logger.debug("politeness: sleeping %.3fs before %s", remaining, host)
                self.clock.sleep(remaining)
                now = self.clock.now()
            self._last[host] = now
            return now

    def last_fetch(self, host: str) -> float | None:
        return self._last.get(host)
