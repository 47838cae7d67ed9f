"""Session store: history, reference resolution, default assumptions.

Sessions hold an append-only record of everything a user sent and what it
produced, which is exactly the context the resolver needs to answer
phrases like "the previous request". Persistence is a single append-only
log of canonical-JSON events replayed at startup, so the store needs no
external database and restarts are bit-exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Iterator, Mapping

from intent_gate.canon import canonical_line, format_timestamp, parse_timestamp
from intent_gate.model import (
    AssumedDefault,
    ExtractionOutcome,
    IntentType,
    StructuredIntent,
)

EVENT_LOG_FORMAT = "intent-gate-events"
EVENT_LOG_VERSION = 1

DEFAULT_SESSION_TTL_SECONDS = 24 * 3600

#: The only attributes the system will silently assume, each paired with
#: its value and the notice template shown to the user.
DEFAULTABLE_ATTRIBUTES: dict[tuple[IntentType, str], tuple[Any, str]] = {
    (IntentType.REGULAR_NOTIFICATION_REQUEST, "frequency"): (
        "PT15M",
        "No notification frequency was given; assuming a default of PT15M "
        "(every 15 minutes).",
    ),
    (IntentType.PERFORMANCE_ASSURANCE, "evaluation_window"): (
        "PT5M",
        "No evaluation window was given; assuming a default of PT5M "
        "(evaluated every 5 minutes).",
    ),
}


def apply_defaults(intent: StructuredIntent) -> StructuredIntent:
    """Fill missing defaultable attributes, noting each assumption.

    Idempotent: attributes already present are never touched, so applying
    twice equals applying once. Non-defaultable attributes are left alone
    for the transform stage to reject.
    """
    attributes = dict(intent.attributes)
    assumed = list(intent.assumed_defaults)
    for (intent_type, name), (value, notice) in DEFAULTABLE_ATTRIBUTES.items():
        if intent.intent_type is intent_type and name not in attributes:
            attributes[name] = value
            assumed.append(AssumedDefault(name=name, value=value, notice=notice))
    if len(assumed) == len(intent.assumed_defaults):
        return intent
    return intent.with_attributes(attributes, assumed)


@dataclass(frozen=True)
class SessionRequest:
    """One handled request in a session's history."""

    request_id: str
    text: str
    timestamp: datetime
    outcome: ExtractionOutcome
    structured_ids: tuple[str, ...]

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "request_id": self.request_id,
            "text": self.text,
            "timestamp": format_timestamp(self.timestamp),
            "outcome": self.outcome.to_jsonable(),
            "structured_ids": list(self.structured_ids),
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "SessionRequest":
        return cls(
            request_id=data["request_id"],
            text=data["text"],
            timestamp=parse_timestamp(data["timestamp"]),
            outcome=ExtractionOutcome.from_jsonable(data["outcome"]),
            structured_ids=tuple(data["structured_ids"]),
        )


@dataclass
class Session:
    """Append-only conversation history for one user session."""

    id: str
    created_at: datetime
    requests: list[SessionRequest] = field(default_factory=list)

    def append(self, request: SessionRequest) -> None:
        if self.requests and request.timestamp < self.requests[-1].timestamp:
            raise ValueError("session history must be ordered by timestamp")
        self.requests.append(request)

    @property
    def last_activity(self) -> datetime:
        return self.requests[-1].timestamp if self.requests else self.created_at

    def structured_ids(self) -> list[str]:
        return [sid for request in self.requests for sid in request.structured_ids]

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "created_at": format_timestamp(self.created_at),
            "requests": [r.to_jsonable() for r in self.requests],
        }


@dataclass(frozen=True)
class ReferenceResolution:
    """Outcome of resolving a phrase against session history."""

    resolved: bool
    intent_id: str | None = None
    reason: str | None = None

    @classmethod
    def ok(cls, intent_id: str) -> "ReferenceResolution":
        return cls(resolved=True, intent_id=intent_id)

    @classmethod
    def failed(cls, reason: str) -> "ReferenceResolution":
        return cls(resolved=False, reason=reason)

    def to_jsonable(self) -> dict[str, Any]:
        if self.resolved:
            return {"resolved": True, "intent_id": self.intent_id}
        return {"resolved": False, "reason": self.reason}


_TYPE_REFERENCES: tuple[tuple[re.Pattern[str], IntentType], ...] = (
    (re.compile(r"\b(?:the\s+)?(?:deployment|network creation)\b", re.I), IntentType.DEPLOYMENT),
    (re.compile(r"\b(?:the\s+)?modification\b", re.I), IntentType.MODIFICATION),
    (re.compile(r"\b(?:the\s+)?(?:performance )?assurance\b", re.I), IntentType.PERFORMANCE_ASSURANCE),
    (re.compile(r"\b(?:the\s+)?feasibility check\b", re.I), IntentType.INTENT_FEASIBILITY_CHECK),
)

_PRIOR_REQUEST = re.compile(r"\b(?:previous|last|earlier|prior)\s+(?:request|intent)\b", re.I)


def resolve_reference(
    session: Session,
    phrase: str,
    intent_lookup: Callable[[str], StructuredIntent | None] | None = None,
) -> ReferenceResolution:
    """Resolve a retrospective phrase to a prior intent in this session.

    "previous request" style phrases pick the most recent structured
    intent; named references ("the deployment") pick the most recent
    intent of that type, which needs the lookup to see intent types.
    Unresolved is a value here, not an error: the gateway turns it into a
    clarification question.
    """
    history = session.structured_ids()
    if not history:
        return ReferenceResolution.failed("no prior request in session")

    if _PRIOR_REQUEST.search(phrase):
        return ReferenceResolution.ok(history[-1])

    for pattern, intent_type in _TYPE_REFERENCES:
        if not pattern.search(phrase):
            continue
        if intent_lookup is None:
            return ReferenceResolution.failed(
                "cannot resolve a typed reference without an intent lookup"
            )
        for sid in reversed(history):
            intent = intent_lookup(sid)
            if intent is not None and intent.intent_type is intent_type:
                return ReferenceResolution.ok(sid)
        return ReferenceResolution.failed(
            f"no prior {intent_type.canonical_name} in session"
        )

    # No named reference matched; fall back to the most recent intent.
    return ReferenceResolution.ok(history[-1])


class SessionStore:
    """In-memory session map with TTL expiry."""

    def __init__(self, ttl_seconds: int = DEFAULT_SESSION_TTL_SECONDS) -> None:
        self._sessions: dict[str, Session] = {}
        self._ttl = ttl_seconds

    def create(self, session_id: str, now: datetime) -> Session:
        if session_id in self._sessions:
            raise ValueError(f"session already exists: {session_id}")
        session = Session(id=session_id, created_at=now)
        self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session | None:
        return self._sessions.get(session_id)

    def get_or_create(self, session_id: str, now: datetime) -> Session:
        return self._sessions.get(session_id) or self.create(session_id, now)

    def prune_expired(self, now: datetime) -> list[str]:
        expired = [
            sid
            for sid, session in self._sessions.items()
            if (now - session.last_activity).total_seconds() > self._ttl
        ]
        for sid in expired:
            del self._sessions[sid]
        return expired

    def all_sessions(self) -> list[Session]:
        return list(self._sessions.values())

    def to_jsonable(self) -> dict[str, Any]:
        return {sid: s.to_jsonable() for sid, s in sorted(self._sessions.items())}


class EventLog:
    """Append-only log of canonical-JSON events with a version header."""

    def __init__(self, path: str | Path) -> None:
        self._path = Path(path)
        if not self._path.exists():
            self._path.parent.mkdir(parents=True, exist_ok=True)
            header = {"format": EVENT_LOG_FORMAT, "version": EVENT_LOG_VERSION}
            self._path.write_text(canonical_line(header), encoding="utf-8")
        self._handle = self._path.open("a", encoding="utf-8")

    @property
    def path(self) -> Path:
        return self._path

    def append(
        self, ts: datetime, session_id: str | None, event_kind: str, payload: Mapping[str, Any]
    ) -> None:
        self._handle.write(
            canonical_line(
                {
                    "ts": format_timestamp(ts),
                    "session_id": session_id,
                    "event_kind": event_kind,
                    "payload": dict(payload),
                }
            )
        )
        self._handle.flush()

    def close(self) -> None:
        self._handle.close()

    @staticmethod
    def read_events(path: str | Path) -> Iterator[dict[str, Any]]:
        """Yield logged events, validating the header line first."""
        import json

        with Path(path).open(encoding="utf-8") as handle:
            header_line = handle.readline()
            if not header_line:
                return
            header = json.loads(header_line)
            if header.get("format") != EVENT_LOG_FORMAT:
                raise ValueError(f"not an event log: {path}")
            if header.get("version") != EVENT_LOG_VERSION:
                raise ValueError(f"unsupported event log version: {header.get('version')}")
            for line in handle:
                if line.strip():
                    yield json.loads(line)
