"""Intent taxonomy, extraction results, and structured-intent schema.

These types are the shared vocabulary of the whole gateway: extraction
backends produce :class:`ExtractionOutcome`, the transform stage turns
detections plus entities into :class:`StructuredIntent`, and everything
downstream (policies, execution records, corpus rows) speaks in terms of
:class:`IntentType`. All types are immutable values with a canonical JSON
encoding (snake_case fields, intent types as their display-name strings).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from intent_gate.durations import is_duration


class UnknownName(ValueError):
    """Raised when a name cannot be resolved to an intent type."""


class IntentType(Enum):
    """The six core-network intent categories."""

    DEPLOYMENT = "Deployment Intent"
    MODIFICATION = "Modification Intent"
    PERFORMANCE_ASSURANCE = "Performance Assurance Intent"
    INTENT_REPORT_REQUEST = "Intent Report Request"
    INTENT_FEASIBILITY_CHECK = "Intent Feasibility Check"
    REGULAR_NOTIFICATION_REQUEST = "Regular Notification Request"

    @property
    def canonical_name(self) -> str:
        """Display name used on the wire and in corpus files."""
        return self.value

    def __str__(self) -> str:
        return self.value


#: Attribute keys legal per intent type. The transform stage layers
#: required/optional rules on top; this is the outer bound that
#: StructuredIntent itself enforces.
ATTRIBUTE_KEYS: Mapping[IntentType, frozenset[str]] = MappingProxyType(
    {
        IntentType.DEPLOYMENT: frozenset(
            {"region", "network_type", "plmn_id", "capacity_target"}
        ),
        IntentType.MODIFICATION: frozenset(
            {"network_id", "network_type", "plmn_id", "capacity_target"}
        ),
        IntentType.PERFORMANCE_ASSURANCE: frozenset(
            {
                "network_id",
                "registered_users_target",
                "pdu_sessions_target",
                "qos_level",
                "evaluation_window",
            }
        ),
        IntentType.INTENT_REPORT_REQUEST: frozenset({"subject_intent"}),
        IntentType.INTENT_FEASIBILITY_CHECK: frozenset(
            {"region", "capacity_target", "subject_intent"}
        ),
        IntentType.REGULAR_NOTIFICATION_REQUEST: frozenset(
            {"network_id", "subject_intent", "frequency"}
        ),
    }
)

_ALIASES: dict[str, IntentType] = {}


def _register_aliases() -> None:
    for intent_type in IntentType:
        _ALIASES[intent_type.value.lower()] = intent_type
    _ALIASES.update(
        {
            "deployment": IntentType.DEPLOYMENT,
            "deploy": IntentType.DEPLOYMENT,
            "modification": IntentType.MODIFICATION,
            "modify": IntentType.MODIFICATION,
            "performance assurance": IntentType.PERFORMANCE_ASSURANCE,
            "assurance": IntentType.PERFORMANCE_ASSURANCE,
            "report": IntentType.INTENT_REPORT_REQUEST,
            "intent report": IntentType.INTENT_REPORT_REQUEST,
            "report request": IntentType.INTENT_REPORT_REQUEST,
            "feasibility": IntentType.INTENT_FEASIBILITY_CHECK,
            "feasibility check": IntentType.INTENT_FEASIBILITY_CHECK,
            "intent feasibility": IntentType.INTENT_FEASIBILITY_CHECK,
            "notification": IntentType.REGULAR_NOTIFICATION_REQUEST,
            "notification request": IntentType.REGULAR_NOTIFICATION_REQUEST,
            "regular notification": IntentType.REGULAR_NOTIFICATION_REQUEST,
        }
    )


_register_aliases()


def parse_intent_type(name: str) -> IntentType:
    """Resolve a display name or short alias, case- and space-insensitively.

    Raises UnknownName when nothing matches.
    """
    normalized = " ".join(name.split()).lower()
    try:
        return _ALIASES[normalized]
    except KeyError:
        raise UnknownName(f"unknown intent type name: {name!r}") from None


Span = tuple[int, int]


def _normalize_spans(spans: Iterable[Sequence[int]]) -> tuple[Span, ...]:
    """Sort spans, reject malformed or overlapping ones."""
    out: list[Span] = []
    for span in spans:
        start, end = int(span[0]), int(span[1])
        if start < 0 or end <= start:
            raise ValueError(f"invalid span: ({start}, {end})")
        out.append((start, end))
    out.sort()
    for (s1, e1), (s2, _e2) in zip(out, out[1:]):
        if s2 < e1:
            raise ValueError(f"overlapping spans: ({s1}, {e1}) and ({s2}, {_e2})")
    return tuple(out)


@dataclass(frozen=True)
class DetectedIntent:
    """One extracted intent with its justification.

    evidence_spans index half-open character ranges in the *request* text;
    a backend that cannot produce offsets (the LLM path) leaves them empty.
    """

    intent_type: IntentType
    explanation: str
    evidence_spans: tuple[Span, ...] = ()
    confidence: float = 1.0

    def __post_init__(self) -> None:
        if not self.explanation.strip():
            raise ValueError("explanation must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")
        object.__setattr__(
            self, "evidence_spans", _normalize_spans(self.evidence_spans)
        )

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "intent_type": self.intent_type.canonical_name,
            "explanation": self.explanation,
            "evidence_spans": [list(span) for span in self.evidence_spans],
            "confidence": self.confidence,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "DetectedIntent":
        return cls(
            intent_type=parse_intent_type(data["intent_type"]),
            explanation=data["explanation"],
            evidence_spans=tuple(
                (span[0], span[1]) for span in data.get("evidence_spans", [])
            ),
            confidence=float(data.get("confidence", 1.0)),
        )


class OutcomeKind(Enum):
    INTENTS = "intents"
    NO_INTENT_PRESENT = "no_intent_present"
    UNKNOWN_INTENT = "unknown_intent"


@dataclass(frozen=True)
class ExtractionOutcome:
    """Result of classifying one request: intents, or one of two sentinels.

    The intents variant behaves like a set keyed by intent type: at most
    one detection per type, stored sorted by display name so serialization
    is deterministic.
    """

    kind: OutcomeKind
    intents: tuple[DetectedIntent, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is OutcomeKind.INTENTS:
            if not self.intents:
                raise ValueError("intents variant requires at least one intent")
            types = [d.intent_type for d in self.intents]
            if len(set(types)) != len(types):
                raise ValueError("at most one detection per intent type")
            ordered = tuple(
                sorted(self.intents, key=lambda d: d.intent_type.canonical_name)
            )
            object.__setattr__(self, "intents", ordered)
        elif self.intents:
            raise ValueError(f"{self.kind.value} carries no intents")

    @classmethod
    def from_intents(cls, intents: Iterable[DetectedIntent]) -> "ExtractionOutcome":
        return cls(kind=OutcomeKind.INTENTS, intents=tuple(intents))

    @classmethod
    def no_intent(cls) -> "ExtractionOutcome":
        return cls(kind=OutcomeKind.NO_INTENT_PRESENT)

    @classmethod
    def unknown(cls) -> "ExtractionOutcome":
        return cls(kind=OutcomeKind.UNKNOWN_INTENT)

    @property
    def intent_types(self) -> frozenset[IntentType]:
        return frozenset(d.intent_type for d in self.intents)

    def is_sentinel(self) -> bool:
        return self.kind is not OutcomeKind.INTENTS

    def to_jsonable(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind.value}
        if self.kind is OutcomeKind.INTENTS:
            out["intents"] = [d.to_jsonable() for d in self.intents]
        return out

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "ExtractionOutcome":
        kind = OutcomeKind(data["kind"])
        if kind is OutcomeKind.INTENTS:
            return cls.from_intents(
                DetectedIntent.from_jsonable(d) for d in data["intents"]
            )
        return cls(kind=kind)


class EntityKind(Enum):
    REGION = "Region"
    NETWORK_ID = "NetworkId"
    PLMN_ID = "PlmnId"
    QOS_LEVEL = "QosLevel"
    FREQUENCY = "Frequency"
    CAPACITY_TARGET = "CapacityTarget"
    REGISTERED_USERS_TARGET = "RegisteredUsersTarget"
    PDU_SESSIONS_TARGET = "PduSessionsTarget"


_COUNT_KINDS = frozenset(
    {
        EntityKind.CAPACITY_TARGET,
        EntityKind.REGISTERED_USERS_TARGET,
        EntityKind.PDU_SESSIONS_TARGET,
    }
)


@dataclass(frozen=True)
class Entity:
    """A typed value pulled out of request text.

    normalized holds the typed value for the kind: text for names and
    identifiers, an ISO-8601 duration string for frequencies, and a
    non-negative int for count targets. QoS levels may be either an int
    level or a named tier.
    """

    kind: EntityKind
    raw_span: Span
    normalized: Any

    def __post_init__(self) -> None:
        start, end = self.raw_span
        if start < 0 or end <= start:
            raise ValueError(f"invalid raw_span: {self.raw_span}")
        object.__setattr__(self, "raw_span", (int(start), int(end)))
        self._check_shape()

    def _check_shape(self) -> None:
        v = self.normalized
        if self.kind in _COUNT_KINDS:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{self.kind.value} must be a non-negative int: {v!r}")
        elif self.kind is EntityKind.FREQUENCY:
            if not isinstance(v, str) or not is_duration(v):
                raise ValueError(f"Frequency must be an ISO-8601 duration: {v!r}")
        elif self.kind is EntityKind.QOS_LEVEL:
            if not (isinstance(v, str) and v) and not (
                isinstance(v, int) and not isinstance(v, bool)
            ):
                raise ValueError(f"QosLevel must be text or an int: {v!r}")
        else:
            if not isinstance(v, str) or not v:
                raise ValueError(f"{self.kind.value} must be non-empty text: {v!r}")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "raw_span": list(self.raw_span),
            "normalized": self.normalized,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "Entity":
        return cls(
            kind=EntityKind(data["kind"]),
            raw_span=(data["raw_span"][0], data["raw_span"][1]),
            normalized=data["normalized"],
        )


@dataclass(frozen=True)
class AssumedDefault:
    """Record of one defaulted attribute plus the user-facing notice."""

    name: str
    value: Any
    notice: str

    def to_jsonable(self) -> dict[str, Any]:
        return {"name": self.name, "value": self.value, "notice": self.notice}

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "AssumedDefault":
        return cls(name=data["name"], value=data["value"], notice=data["notice"])


@dataclass(frozen=True)
class StructuredIntent:
    """A typed, validated intent instance ready for policy compilation."""

    id: str
    intent_type: IntentType
    attributes: Mapping[str, Any]
    source_request_id: str
    assumed_defaults: tuple[AssumedDefault, ...] = ()

    def __post_init__(self) -> None:
        legal = ATTRIBUTE_KEYS[self.intent_type]
        illegal = set(self.attributes) - set(legal)
        if illegal:
            raise ValueError(
                f"attributes not legal for {self.intent_type.canonical_name}: "
                f"{sorted(illegal)}"
            )
        for assumed in self.assumed_defaults:
            if assumed.name not in self.attributes:
                raise ValueError(
                    f"assumed default {assumed.name!r} missing from attributes"
                )
        object.__setattr__(self, "attributes", MappingProxyType(dict(self.attributes)))
        object.__setattr__(self, "assumed_defaults", tuple(self.assumed_defaults))

    def with_attributes(
        self,
        attributes: Mapping[str, Any],
        assumed_defaults: Sequence[AssumedDefault],
    ) -> "StructuredIntent":
        return StructuredIntent(
            id=self.id,
            intent_type=self.intent_type,
            attributes=attributes,
            source_request_id=self.source_request_id,
            assumed_defaults=tuple(assumed_defaults),
        )

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "intent_type": self.intent_type.canonical_name,
            "attributes": dict(self.attributes),
            "source_request_id": self.source_request_id,
            "assumed_defaults": [a.to_jsonable() for a in self.assumed_defaults],
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "StructuredIntent":
        return cls(
            id=data["id"],
            intent_type=parse_intent_type(data["intent_type"]),
            attributes=data["attributes"],
            source_request_id=data["source_request_id"],
            assumed_defaults=tuple(
                AssumedDefault.from_jsonable(a)
                for a in data.get("assumed_defaults", [])
            ),
        )
