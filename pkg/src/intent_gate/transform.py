"""Turns detections plus entities plus context into policies.

Two stages live here. ``to_structured`` maps extracted entities onto the
attribute slots legal for the detected intent type, attaches resolved
references, applies defaults, and rejects anything still missing a
required attribute (the gateway turns that rejection into a clarification
question). ``compile_policy`` then deterministically lowers a validated
structured intent into the JSON policy document the execution module
consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from intent_gate.context import ReferenceResolution, apply_defaults
from intent_gate.model import (
    DetectedIntent,
    Entity,
    EntityKind,
    IntentType,
    StructuredIntent,
)


class MissingAttribute(ValueError):
    """A required attribute could not be filled from entities or context."""

    def __init__(self, attribute: str, question: str) -> None:
        super().__init__(f"missing required attribute: {attribute}")
        self.attribute = attribute
        self.question = question


#: Bijection between intent types and policy action verbs.
ACTION_BY_TYPE: dict[IntentType, str] = {
    IntentType.DEPLOYMENT: "deploy_core_network",
    IntentType.MODIFICATION: "modify_core_network",
    IntentType.PERFORMANCE_ASSURANCE: "assure_performance",
    IntentType.INTENT_REPORT_REQUEST: "generate_report",
    IntentType.INTENT_FEASIBILITY_CHECK: "check_feasibility",
    IntentType.REGULAR_NOTIFICATION_REQUEST: "subscribe_notifications",
}

_ENTITY_ATTRIBUTE: dict[EntityKind, str] = {
    EntityKind.REGION: "region",
    EntityKind.NETWORK_ID: "network_id",
    EntityKind.PLMN_ID: "plmn_id",
    EntityKind.QOS_LEVEL: "qos_level",
    EntityKind.FREQUENCY: "frequency",
    EntityKind.CAPACITY_TARGET: "capacity_target",
    EntityKind.REGISTERED_USERS_TARGET: "registered_users_target",
    EntityKind.PDU_SESSIONS_TARGET: "pdu_sessions_target",
}

#: Attributes that may be filled from entity extraction, per intent type.
_ENTITY_SLOTS: dict[IntentType, frozenset[str]] = {
    IntentType.DEPLOYMENT: frozenset({"region", "plmn_id", "capacity_target"}),
    IntentType.MODIFICATION: frozenset({"network_id", "plmn_id", "capacity_target"}),
    IntentType.PERFORMANCE_ASSURANCE: frozenset(
        {"network_id", "registered_users_target", "pdu_sessions_target", "qos_level"}
    ),
    IntentType.INTENT_REPORT_REQUEST: frozenset(),
    IntentType.INTENT_FEASIBILITY_CHECK: frozenset({"region", "capacity_target"}),
    IntentType.REGULAR_NOTIFICATION_REQUEST: frozenset({"network_id", "frequency"}),
}

#: Intent types whose subject may come from reference resolution.
_SUBJECT_TYPES = frozenset(
    {
        IntentType.INTENT_REPORT_REQUEST,
        IntentType.INTENT_FEASIBILITY_CHECK,
        IntentType.REGULAR_NOTIFICATION_REQUEST,
    }
)

PERFORMANCE_TARGET_ATTRIBUTES = (
    "registered_users_target",
    "pdu_sessions_target",
    "qos_level",
)


def _first_missing(intent_type: IntentType, attrs: Mapping[str, Any]) -> MissingAttribute | None:
    if intent_type is IntentType.DEPLOYMENT and "region" not in attrs:
        return MissingAttribute("region", "Which region should the new network be deployed in?")
    if intent_type is IntentType.MODIFICATION and "network_id" not in attrs:
        return MissingAttribute("network_id", "Which network should be modified?")
    if intent_type is IntentType.PERFORMANCE_ASSURANCE:
        if "network_id" not in attrs:
            return MissingAttribute(
                "network_id", "Which network should the performance expectation apply to?"
            )
        if not any(name in attrs for name in PERFORMANCE_TARGET_ATTRIBUTES):
            return MissingAttribute(
                "performance_target",
                "What should be assured? Give a registered-users target, a PDU-session "
                "target, or a QoS level.",
            )
    if intent_type is IntentType.INTENT_REPORT_REQUEST and "subject_intent" not in attrs:
        return MissingAttribute(
            "subject_intent", "Which previous request should the report cover?"
        )
    if intent_type is IntentType.INTENT_FEASIBILITY_CHECK:
        if "region" not in attrs and "subject_intent" not in attrs:
            return MissingAttribute(
                "region", "Which region (or which previous request) should be checked?"
            )
    if intent_type is IntentType.REGULAR_NOTIFICATION_REQUEST:
        if "network_id" not in attrs and "subject_intent" not in attrs:
            return MissingAttribute(
                "subject", "What should the notifications cover: which network or request?"
            )
    return None


def to_structured(
    detected: DetectedIntent,
    entities: Sequence[Entity],
    resolution: ReferenceResolution | None,
    *,
    intent_id: str,
    source_request_id: str,
) -> StructuredIntent:
    """Build a validated StructuredIntent or raise MissingAttribute.

    Entities must come from the same text the detection was made on.
    When several entities share a kind, the earliest by span wins.
    """
    slots = _ENTITY_SLOTS[detected.intent_type]
    attrs: dict[str, Any] = {}
    for entity in entities:
        name = _ENTITY_ATTRIBUTE[entity.kind]
        if name in slots and name not in attrs:
            attrs[name] = entity.normalized

    if detected.intent_type in _SUBJECT_TYPES and resolution is not None and resolution.resolved:
        # A concrete network or region mentioned in the text takes priority
        # over a resolved back-reference for feasibility and notification.
        if detected.intent_type is IntentType.INTENT_REPORT_REQUEST or not (
            attrs.keys() & {"region", "network_id"}
        ):
            attrs["subject_intent"] = resolution.intent_id

    intent = StructuredIntent(
        id=intent_id,
        intent_type=detected.intent_type,
        attributes=attrs,
        source_request_id=source_request_id,
    )
    intent = apply_defaults(intent)

    missing = _first_missing(intent.intent_type, intent.attributes)
    if missing is not None:
        raise missing
    return intent


@dataclass(frozen=True)
class Constraint:
    """A metric bound the network must satisfy."""

    metric: str
    comparator: str
    value: Any

    def __post_init__(self) -> None:
        if self.comparator not in (">=", "<=", "=="):
            raise ValueError(f"unsupported comparator: {self.comparator}")

    def to_jsonable(self) -> dict[str, Any]:
        return {"metric": self.metric, "comparator": self.comparator, "value": self.value}

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "Constraint":
        return cls(metric=data["metric"], comparator=data["comparator"], value=data["value"])


@dataclass(frozen=True)
class PolicyDocument:
    """Machine-executable form of one structured intent."""

    policy_id: str
    intent_id: str
    action: str
    target: Mapping[str, Any]
    parameters: Mapping[str, Any]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        if self.action not in ACTION_BY_TYPE.values():
            raise ValueError(f"unknown policy action: {self.action}")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "policy_id": self.policy_id,
            "intent_id": self.intent_id,
            "action": self.action,
            "target": dict(self.target),
            "parameters": dict(self.parameters),
            "constraints": [c.to_jsonable() for c in self.constraints],
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "PolicyDocument":
        return cls(
            policy_id=data["policy_id"],
            intent_id=data["intent_id"],
            action=data["action"],
            target=data["target"],
            parameters=data["parameters"],
            constraints=tuple(Constraint.from_jsonable(c) for c in data["constraints"]),
        )


def constraints_for(intent: StructuredIntent) -> tuple[Constraint, ...]:
    """Constraints induced by an intent's target-valued attributes."""
    attrs = intent.attributes
    out: list[Constraint] = []
    if "registered_users_target" in attrs:
        out.append(Constraint("registered_users", ">=", attrs["registered_users_target"]))
    if "pdu_sessions_target" in attrs:
        out.append(Constraint("pdu_sessions", ">=", attrs["pdu_sessions_target"]))
    if "qos_level" in attrs:
        value = attrs["qos_level"]
        comparator = ">=" if isinstance(value, int) and not isinstance(value, bool) else "=="
        out.append(Constraint("qos_level", comparator, value))
    return tuple(out)


def compile_policy(intent: StructuredIntent, *, policy_id: str) -> PolicyDocument:
    """Deterministically lower a validated intent into a policy document.

    Every attribute of the intent lands in exactly one place: the target,
    the parameters, or as the source of a constraint.
    """
    t = intent.intent_type
    attrs = dict(intent.attributes)
    target: dict[str, Any] = {}
    parameters: dict[str, Any] = {}
    constraints: tuple[Constraint, ...] = ()

    if t is IntentType.DEPLOYMENT:
        target["region"] = attrs.pop("region")
        parameters.update(attrs)
    elif t is IntentType.MODIFICATION:
        target["network_id"] = attrs.pop("network_id")
        parameters.update(attrs)
    elif t is IntentType.PERFORMANCE_ASSURANCE:
        target["network_id"] = attrs.pop("network_id")
        constraints = constraints_for(intent)
        for name in PERFORMANCE_TARGET_ATTRIBUTES:
            attrs.pop(name, None)
        parameters.update(attrs)
    elif t is IntentType.INTENT_REPORT_REQUEST:
        target["subject_intent"] = attrs.pop("subject_intent")
        parameters.update(attrs)
    elif t is IntentType.INTENT_FEASIBILITY_CHECK:
        if "region" in attrs:
            target["region"] = attrs.pop("region")
        else:
            target["subject_intent"] = attrs.pop("subject_intent")
        parameters.update(attrs)
    elif t is IntentType.REGULAR_NOTIFICATION_REQUEST:
        if "network_id" in attrs:
            target["network_id"] = attrs.pop("network_id")
        else:
            target["subject_intent"] = attrs.pop("subject_intent")
        parameters.update(attrs)

    return PolicyDocument(
        policy_id=policy_id,
        intent_id=intent.id,
        action=ACTION_BY_TYPE[t],
        target=target,
        parameters=parameters,
        constraints=constraints,
    )
