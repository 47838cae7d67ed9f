"""Entity extraction over request text.

A small pattern grammar pulls out the parameters the downstream attribute
schema cares about: regions, network identifiers, PLMN ids, QoS levels,
frequencies, and numeric targets with unit cues. Results come back
ordered by span start with overlaps resolved in favour of the earliest,
longest match.
"""

from __future__ import annotations

import re
from typing import Callable, Iterator

from intent_gate.durations import SECONDS_PER_DAY, SECONDS_PER_HOUR, SECONDS_PER_MINUTE, format_duration
from intent_gate.model import Entity, EntityKind

_UNIT_SECONDS = {
    "second": 1,
    "sec": 1,
    "minute": SECONDS_PER_MINUTE,
    "min": SECONDS_PER_MINUTE,
    "hour": SECONDS_PER_HOUR,
    "hr": SECONDS_PER_HOUR,
    "day": SECONDS_PER_DAY,
    "week": 7 * SECONDS_PER_DAY,
    "morning": SECONDS_PER_DAY,
    "night": SECONDS_PER_DAY,
}

# Capitalized tokens that follow "in"/"within"/"at" but are never regions.
_REGION_STOPLIST = {"plmn", "qos", "pdu", "iot", "i", "a", "an", "the", "urgent", "asap"}


def _unit_seconds(word: str) -> int:
    return _UNIT_SECONDS[word.rstrip("s") if word.rstrip("s") in _UNIT_SECONDS else word]


def _int_value(text: str) -> int:
    return int(text.replace(",", ""))


Finder = Callable[[str], Iterator[Entity]]


def _find_frequencies(text: str) -> Iterator[Entity]:
    for m in re.finditer(
        r"\bevery\s+(\d+)\s*(seconds?|secs?|minutes?|mins?|hours?|hrs?|days?|weeks?)\b",
        text,
        re.IGNORECASE,
    ):
        seconds = int(m.group(1)) * _unit_seconds(m.group(2).lower())
        yield Entity(EntityKind.FREQUENCY, m.span(), format_duration(seconds))
    for m in re.finditer(
        r"\bevery\s+(second|minute|min|hour|day|week|morning|night)\b", text, re.IGNORECASE
    ):
        yield Entity(
            EntityKind.FREQUENCY, m.span(), format_duration(_unit_seconds(m.group(1).lower()))
        )
    for m in re.finditer(r"\bevery\s+half\s+(?:an\s+)?hour\b", text, re.IGNORECASE):
        yield Entity(EntityKind.FREQUENCY, m.span(), "PT30M")
    for m in re.finditer(r"\b(hourly|daily|weekly)\b", text, re.IGNORECASE):
        word = m.group(1).lower()
        seconds = {"hourly": SECONDS_PER_HOUR, "daily": SECONDS_PER_DAY, "weekly": 7 * SECONDS_PER_DAY}[word]
        yield Entity(EntityKind.FREQUENCY, m.span(), format_duration(seconds))
    for m in re.finditer(r"\bonce\s+(?:a|an|per)\s+(minute|hour|day|week)\b", text, re.IGNORECASE):
        yield Entity(
            EntityKind.FREQUENCY, m.span(), format_duration(_unit_seconds(m.group(1).lower()))
        )


def _find_regions(text: str) -> Iterator[Entity]:
    for m in re.finditer(
        r"\b(?:in|within|at)\s+(?:the\s+)?region\s+([A-Za-z0-9][\w-]*)", text, re.IGNORECASE
    ):
        yield Entity(EntityKind.REGION, m.span(1), m.group(1))
    for m in re.finditer(r"\b(?:in|within|at)\s+(?:the\s+)?([A-Z][A-Za-z0-9_-]+)\b", text):
        token = m.group(1)
        if token.lower() in _REGION_STOPLIST:
            continue
        yield Entity(EntityKind.REGION, m.span(1), token)


def _find_network_ids(text: str) -> Iterator[Entity]:
    for m in re.finditer(r"\bnet(?:work)?[-_][A-Za-z0-9]+\b", text, re.IGNORECASE):
        yield Entity(EntityKind.NETWORK_ID, m.span(), m.group(0))
    for m in re.finditer(
        r"\bnetwork\s+(?:id\s+)?([A-Za-z]*\d[A-Za-z0-9_-]*)\b", text, re.IGNORECASE
    ):
        yield Entity(EntityKind.NETWORK_ID, m.span(1), m.group(1))


def _find_plmn_ids(text: str) -> Iterator[Entity]:
    for m in re.finditer(r"\bplmn(?:\s+id)?\s*:?\s*(\d{3})[-\s]?(\d{2,3})\b", text, re.IGNORECASE):
        yield Entity(EntityKind.PLMN_ID, m.span(), f"{m.group(1)}-{m.group(2)}")
    for m in re.finditer(r"\b(\d{3})-(\d{2,3})\b", text):
        yield Entity(EntityKind.PLMN_ID, m.span(), f"{m.group(1)}-{m.group(2)}")


def _find_qos_levels(text: str) -> Iterator[Entity]:
    for m in re.finditer(r"\bqos\s*(?:level)?\s*[:=]?\s*(\d+)\b", text, re.IGNORECASE):
        yield Entity(EntityKind.QOS_LEVEL, m.span(), int(m.group(1)))
    for m in re.finditer(r"\bqos\s+level\s+([A-Za-z]+)\b", text, re.IGNORECASE):
        yield Entity(EntityKind.QOS_LEVEL, m.span(), m.group(1).lower())
    for m in re.finditer(r"\b5qi\s*[:=]?\s*(\d+)\b", text, re.IGNORECASE):
        yield Entity(EntityKind.QOS_LEVEL, m.span(), int(m.group(1)))
    for m in re.finditer(
        r"\b(premium|gold|silver|bronze|high|low)[-\s]qos\b", text, re.IGNORECASE
    ):
        yield Entity(EntityKind.QOS_LEVEL, m.span(), m.group(1).lower())


def _find_counts(text: str) -> Iterator[Entity]:
    for m in re.finditer(r"\b([\d,]+)\s+(?:registered\s+)?users\b", text, re.IGNORECASE):
        yield Entity(EntityKind.REGISTERED_USERS_TARGET, m.span(), _int_value(m.group(1)))
    for m in re.finditer(
        r"\b([\d,]+)\s+(?:concurrent\s+)?pdu\s+sessions?\b", text, re.IGNORECASE
    ):
        yield Entity(EntityKind.PDU_SESSIONS_TARGET, m.span(), _int_value(m.group(1)))
    for m in re.finditer(
        r"\bcapacity\s*(?:target)?\s*(?:of|:|=|to)?\s*([\d,]+)\s*(?:units?)?", text, re.IGNORECASE
    ):
        yield Entity(EntityKind.CAPACITY_TARGET, m.span(), _int_value(m.group(1)))
    for m in re.finditer(r"\b([\d,]+)\s+capacity\s+units?\b", text, re.IGNORECASE):
        yield Entity(EntityKind.CAPACITY_TARGET, m.span(), _int_value(m.group(1)))
    for m in re.finditer(r"\b([\d,]+)\s+units?\s+of\s+capacity\b", text, re.IGNORECASE):
        yield Entity(EntityKind.CAPACITY_TARGET, m.span(), _int_value(m.group(1)))


_FINDERS: tuple[Finder, ...] = (
    _find_frequencies,
    _find_regions,
    _find_network_ids,
    _find_plmn_ids,
    _find_qos_levels,
    _find_counts,
)


def extract_entities(text: str) -> list[Entity]:
    """Extract typed entities, ordered by span start, spans non-overlapping.

    Overlapping candidates are resolved by earliest start, then longest
    match; an empty list is a valid result.
    """
    candidates = [entity for finder in _FINDERS for entity in finder(text)]
    candidates.sort(key=lambda e: (e.raw_span[0], -(e.raw_span[1] - e.raw_span[0])))
    chosen: list[Entity] = []
    last_end = -1
    for entity in candidates:
        start, end = entity.raw_span
        if start >= last_end:
            chosen.append(entity)
            last_end = end
    return chosen
