"""Clock abstraction: core logic only ever sees an injected clock.

The logical clock is the default for tests and deterministic gateway runs;
it starts at a fixed epoch and moves only when explicitly advanced. The
wall clock adapter exists for live serving and is never used inside the
execution engine directly.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

DEFAULT_EPOCH = datetime(2025, 1, 1, 0, 0, 0, tzinfo=timezone.utc)


class LogicalClock:
    """Monotone clock advanced explicitly, in whole seconds."""

    def __init__(self, start: datetime = DEFAULT_EPOCH) -> None:
        if start.tzinfo is None:
            raise ValueError("clock start must be timezone-aware")
        self._now = start

    def now(self) -> datetime:
        return self._now

    def advance(self, seconds: int) -> datetime:
        if seconds < 0:
            raise ValueError("clock cannot move backwards")
        self._now = self._now + timedelta(seconds=seconds)
        return self._now


class WallClock:
    """Real-time adapter; only the gateway's live serve path uses it."""

    def now(self) -> datetime:
        return datetime.now(timezone.utc)
