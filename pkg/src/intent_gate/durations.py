"""ISO-8601 duration handling for notification frequencies and windows.

Supports the day/time subset (PnDTnHnMnS) with integer components, which
covers every duration this system produces. Durations are carried around
as whole seconds; the formatted form is canonical (largest units first,
zero components omitted).
"""

from __future__ import annotations

import re

_DURATION_RE = re.compile(
    r"^P(?:(?P<days>\d+)D)?(?:T(?:(?P<hours>\d+)H)?(?:(?P<minutes>\d+)M)?(?:(?P<seconds>\d+)S)?)?$"
)

SECONDS_PER_MINUTE = 60
SECONDS_PER_HOUR = 3600
SECONDS_PER_DAY = 86400


def parse_duration(text: str) -> int:
    """Parse an ISO-8601 day/time duration into whole seconds.

    Raises ValueError on anything outside the PnDTnHnMnS subset or on a
    designator-free string like "P" / "PT".
    """
    m = _DURATION_RE.match(text.strip())
    if not m:
        raise ValueError(f"not an ISO-8601 duration: {text!r}")
    parts = {k: int(v) for k, v in m.groupdict().items() if v is not None}
    if not parts:
        raise ValueError(f"duration has no components: {text!r}")
    return (
        parts.get("days", 0) * SECONDS_PER_DAY
        + parts.get("hours", 0) * SECONDS_PER_HOUR
        + parts.get("minutes", 0) * SECONDS_PER_MINUTE
        + parts.get("seconds", 0)
    )


def format_duration(seconds: int) -> str:
    """Render whole seconds as a canonical ISO-8601 duration."""
    if seconds < 0:
        raise ValueError("durations cannot be negative")
    if seconds == 0:
        return "PT0S"
    days, rem = divmod(seconds, SECONDS_PER_DAY)
    hours, rem = divmod(rem, SECONDS_PER_HOUR)
    minutes, secs = divmod(rem, SECONDS_PER_MINUTE)
    out = "P"
    if days:
        out += f"{days}D"
    if hours or minutes or secs:
        out += "T"
        if hours:
            out += f"{hours}H"
        if minutes:
            out += f"{minutes}M"
        if secs:
            out += f"{secs}S"
    return out


def is_duration(text: str) -> bool:
    """True when ``text`` parses as a duration."""
    try:
        parse_duration(text)
    except (ValueError, AttributeError, TypeError):
        return False
    return True
