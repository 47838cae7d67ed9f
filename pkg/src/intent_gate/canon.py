"""Canonical JSON encoding shared by the API, fixtures, and data files.

Every serialized artifact (wire bodies, event logs, corpus files, golden
fixtures) uses the same byte-stable form: sorted keys, compact separators,
UTF-8 text without escaping. Timestamps are UTC ISO-8601 with a Z suffix.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any


def canonical_dumps(obj: Any) -> str:
    """Serialize to the canonical single-line JSON form."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_line(obj: Any) -> str:
    """One canonical JSON object terminated by a newline (log/corpus rows)."""
    return canonical_dumps(obj) + "\n"


def format_timestamp(ts: datetime) -> str:
    """Render a UTC timestamp as ISO-8601 with a Z suffix, second precision."""
    if ts.tzinfo is None:
        raise ValueError("timestamps must be timezone-aware")
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_timestamp(text: str) -> datetime:
    """Inverse of :func:`format_timestamp`."""
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)
