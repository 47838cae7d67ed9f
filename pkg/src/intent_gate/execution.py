"""Request execution against the simulated core network.

Holds the inventory (regions, networks, capacity), runs feasibility
arithmetic, drives intent lifecycles through the legal state machine,
re-evaluates performance monitors, detects conflicts, renders reports,
and fires notification subscriptions off a logical clock.

All mutation goes through one engine instance under a single-writer
discipline (the gateway serializes calls); reads hand out plain JSON
snapshots. Nothing in here ever consults the wall clock.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Any, Callable, Iterable, Mapping

from intent_gate.canon import format_timestamp
from intent_gate.durations import parse_duration
from intent_gate.ids import IdGenerator
from intent_gate.model import IntentType, StructuredIntent
from intent_gate.transform import Constraint, PolicyDocument, constraints_for

#: Simulated capacity model: one capacity unit carries this many users.
USERS_PER_CAPACITY_UNIT = 1000
#: And this many PDU sessions.
PDU_SESSIONS_PER_CAPACITY_UNIT = 2000
#: Capacity units assumed when a deployment does not state a target.
DEFAULT_CAPACITY_UNITS = 1


class UnknownRegion(KeyError):
    """Region absent from the inventory's capacity table."""


class UnknownNetwork(KeyError):
    """Network id absent from the inventory."""


class UnknownIntentId(KeyError):
    """Intent id absent from the engine's record store."""


class IllegalTransition(RuntimeError):
    """Attempted fulfilment-status transition outside the legal set."""


class FulfilmentStatus:
    PENDING = "Pending"
    INFEASIBLE = "Infeasible"
    IN_PROGRESS = "InProgress"
    FULFILLED = "Fulfilled"
    DEGRADED = "Degraded"
    FAILED = "Failed"


LEGAL_TRANSITIONS: dict[str, frozenset[str]] = {
    FulfilmentStatus.PENDING: frozenset(
        {
            FulfilmentStatus.INFEASIBLE,
            FulfilmentStatus.IN_PROGRESS,
            FulfilmentStatus.FAILED,
            FulfilmentStatus.FULFILLED,
        }
    ),
    FulfilmentStatus.IN_PROGRESS: frozenset(
        {FulfilmentStatus.FULFILLED, FulfilmentStatus.DEGRADED, FulfilmentStatus.FAILED}
    ),
    FulfilmentStatus.DEGRADED: frozenset({FulfilmentStatus.FULFILLED}),
    FulfilmentStatus.FULFILLED: frozenset({FulfilmentStatus.DEGRADED}),
    FulfilmentStatus.INFEASIBLE: frozenset(),
    FulfilmentStatus.FAILED: frozenset(),
}


class NetworkStatus:
    ACTIVE = "Active"
    DEPLOYING = "Deploying"
    DEGRADED = "Degraded"
    DECOMMISSIONED = "Decommissioned"


@dataclass
class NetworkRecord:
    """One simulated core network."""

    id: str
    region: str
    network_type: str = "5g-core"
    plmn_id: str | None = None
    capacity_units: int = DEFAULT_CAPACITY_UNITS
    registered_users: int = 0
    max_users: int = DEFAULT_CAPACITY_UNITS * USERS_PER_CAPACITY_UNIT
    pdu_sessions: int = 0
    status: str = NetworkStatus.ACTIVE

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.capacity_units < 0 or self.registered_users < 0 or self.pdu_sessions < 0:
            raise ValueError("network counters cannot be negative")
        if self.registered_users > self.max_users:
            raise ValueError(
                f"registered_users ({self.registered_users}) exceeds max_users "
                f"({self.max_users}) on {self.id}"
            )

    def metric(self, name: str) -> Any:
        if name == "registered_users":
            return self.registered_users
        if name == "pdu_sessions":
            return self.pdu_sessions
        if name == "capacity_units":
            return self.capacity_units
        if name == "qos_level":
            # The simulator derives sustainable QoS from headroom: a
            # network at or under half its user capacity sustains level 5,
            # degrading one level per extra 10% of load.
            load = self.registered_users / self.max_users if self.max_users else 1.0
            return max(1, 5 - max(0, int((load - 0.5) * 10)))
        raise KeyError(f"unknown metric: {name}")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "region": self.region,
            "network_type": self.network_type,
            "plmn_id": self.plmn_id,
            "capacity_units": self.capacity_units,
            "registered_users": self.registered_users,
            "max_users": self.max_users,
            "pdu_sessions": self.pdu_sessions,
            "status": self.status,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "NetworkRecord":
        return cls(**dict(data))


class Inventory:
    """Networks plus per-region capacity budgets.

    Invariant: for every region, the capacity units of non-decommissioned
    networks never exceed the region budget.
    """

    def __init__(
        self,
        region_capacity: Mapping[str, int] | None = None,
        networks: Iterable[NetworkRecord] = (),
    ) -> None:
        self.region_capacity: dict[str, int] = dict(region_capacity or {})
        self.networks: dict[str, NetworkRecord] = {n.id: n for n in networks}
        self.check_invariant()

    def allocated_units(self, region: str) -> int:
        return sum(
            n.capacity_units
            for n in self.networks.values()
            if n.region == region and n.status != NetworkStatus.DECOMMISSIONED
        )

    def available_units(self, region: str) -> int:
        if region not in self.region_capacity:
            raise UnknownRegion(region)
        return self.region_capacity[region] - self.allocated_units(region)

    def network(self, network_id: str) -> NetworkRecord:
        try:
            return self.networks[network_id]
        except KeyError:
            raise UnknownNetwork(network_id) from None

    def add_network(self, record: NetworkRecord) -> None:
        if record.id in self.networks:
            raise ValueError(f"duplicate network id: {record.id}")
        self.networks[record.id] = record
        self.check_invariant()

    def check_invariant(self) -> None:
        for region in self.region_capacity:
            allocated = self.allocated_units(region)
            if allocated > self.region_capacity[region]:
                raise ValueError(
                    f"capacity conservation violated in {region}: "
                    f"{allocated} > {self.region_capacity[region]}"
                )
        for network in self.networks.values():
            if network.region not in self.region_capacity:
                raise ValueError(f"network {network.id} in unknown region {network.region}")
            network.validate()

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "region_capacity": dict(sorted(self.region_capacity.items())),
            "networks": [
                self.networks[k].to_jsonable() for k in sorted(self.networks)
            ],
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "Inventory":
        return cls(
            region_capacity=data.get("region_capacity", {}),
            networks=[NetworkRecord.from_jsonable(n) for n in data.get("networks", [])],
        )


@dataclass(frozen=True)
class FeasibilityResult:
    verdict: str  # "feasible" | "infeasible"
    required_units: int
    available_units: int
    detail: str

    def __post_init__(self) -> None:
        expected = "feasible" if self.required_units <= self.available_units else "infeasible"
        if self.verdict != expected:
            raise ValueError(
                f"verdict {self.verdict!r} inconsistent with units "
                f"{self.required_units}/{self.available_units}"
            )

    @classmethod
    def from_units(cls, required: int, available: int, detail: str) -> "FeasibilityResult":
        verdict = "feasible" if required <= available else "infeasible"
        return cls(verdict, required, available, detail)

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "required_units": self.required_units,
            "available_units": self.available_units,
            "detail": self.detail,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "FeasibilityResult":
        return cls(
            verdict=data["verdict"],
            required_units=data["required_units"],
            available_units=data["available_units"],
            detail=data["detail"],
        )


def check_feasibility(intent: StructuredIntent, inventory: Inventory) -> FeasibilityResult:
    """Capacity arithmetic for one intent against the current inventory.

    Deployments and region-scoped feasibility checks demand their stated
    capacity target (one unit when unstated); modifications demand only
    the increase over what the network already holds. Every other intent
    type is vacuously feasible. Raises UnknownRegion / UnknownNetwork.
    """
    attrs = intent.attributes
    t = intent.intent_type

    if t is IntentType.DEPLOYMENT or (
        t is IntentType.INTENT_FEASIBILITY_CHECK and "region" in attrs
    ):
        region = attrs["region"]
        required = int(attrs.get("capacity_target", DEFAULT_CAPACITY_UNITS))
        available = inventory.available_units(region)
        return FeasibilityResult.from_units(
            required, available, f"{required} unit(s) requested in {region}, {available} free"
        )

    if t is IntentType.MODIFICATION:
        network = inventory.network(attrs["network_id"])
        if "capacity_target" in attrs:
            required = max(0, int(attrs["capacity_target"]) - network.capacity_units)
        else:
            required = 0
        available = inventory.available_units(network.region)
        return FeasibilityResult.from_units(
            required,
            available,
            f"{required} additional unit(s) needed in {network.region}, {available} free",
        )

    return FeasibilityResult.from_units(0, 0, "intent type is not capacity-bearing")


@dataclass
class FulfilmentInfo:
    status: str = FulfilmentStatus.PENDING
    achieved: dict[str, Any] = field(default_factory=dict)
    targets: dict[str, Any] = field(default_factory=dict)
    conflicts: list[tuple[str, str]] = field(default_factory=list)
    feasibility: FeasibilityResult | None = None
    failure_reason: str | None = None

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "achieved": dict(sorted(self.achieved.items())),
            "targets": dict(sorted(self.targets.items())),
            "conflicts": [
                {"intent_id": cid, "reason": reason} for cid, reason in self.conflicts
            ],
            "feasibility": self.feasibility.to_jsonable() if self.feasibility else None,
            "failure_reason": self.failure_reason,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "FulfilmentInfo":
        return cls(
            status=data["status"],
            achieved=dict(data["achieved"]),
            targets=dict(data["targets"]),
            conflicts=[(c["intent_id"], c["reason"]) for c in data["conflicts"]],
            feasibility=(
                FeasibilityResult.from_jsonable(data["feasibility"])
                if data.get("feasibility")
                else None
            ),
            failure_reason=data.get("failure_reason"),
        )


@dataclass
class IntentRecord:
    """Lifecycle state of one submitted intent."""

    intent: StructuredIntent
    policy: PolicyDocument
    fulfilment: FulfilmentInfo
    created_at: datetime
    updated_at: datetime
    session_id: str | None = None
    subject_network_id: str | None = None
    report: dict[str, Any] | None = None

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "intent": self.intent.to_jsonable(),
            "policy": self.policy.to_jsonable(),
            "fulfilment": self.fulfilment.to_jsonable(),
            "created_at": format_timestamp(self.created_at),
            "updated_at": format_timestamp(self.updated_at),
            "session_id": self.session_id,
            "subject_network_id": self.subject_network_id,
            "report": self.report,
        }


@dataclass
class NotificationSubscription:
    id: str
    subject_kind: str  # "intent" | "network"
    subject_id: str
    frequency_seconds: int
    next_fire: datetime
    active: bool = True
    source_intent_id: str | None = None

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "subject_kind": self.subject_kind,
            "subject_id": self.subject_id,
            "frequency_seconds": self.frequency_seconds,
            "next_fire": format_timestamp(self.next_fire),
            "active": self.active,
            "source_intent_id": self.source_intent_id,
        }


@dataclass(frozen=True)
class Notification:
    subscription_id: str
    subject_kind: str
    subject_id: str
    fired_at: datetime
    status: str

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "subscription_id": self.subscription_id,
            "subject_kind": self.subject_kind,
            "subject_id": self.subject_id,
            "fired_at": format_timestamp(self.fired_at),
            "status": self.status,
        }


def _constraint_interval(c: Constraint) -> tuple[float, float] | None:
    """Numeric constraints as closed intervals; None for text equality."""
    if not isinstance(c.value, (int, float)) or isinstance(c.value, bool):
        return None
    if c.comparator == ">=":
        return (float(c.value), float("inf"))
    if c.comparator == "<=":
        return (float("-inf"), float(c.value))
    return (float(c.value), float(c.value))


def _constraints_conflict(a: Constraint, b: Constraint) -> bool:
    if a.metric != b.metric:
        return False
    ia, ib = _constraint_interval(a), _constraint_interval(b)
    if ia is None or ib is None:
        # Text-valued: only equality constraints exist, conflicting when
        # they demand different values.
        return (
            ia is None
            and ib is None
            and a.comparator == "=="
            and b.comparator == "=="
            and a.value != b.value
        )
    return max(ia[0], ib[0]) > min(ia[1], ib[1])


_ACTIVE_STATUSES = frozenset(
    {
        FulfilmentStatus.PENDING,
        FulfilmentStatus.IN_PROGRESS,
        FulfilmentStatus.FULFILLED,
        FulfilmentStatus.DEGRADED,
    }
)


def detect_conflicts(
    new: StructuredIntent, active: Iterable[IntentRecord]
) -> list[tuple[str, str]]:
    """Flag contradictory expectations between a new intent and live ones.

    Two cases: constraints on the same metric of the same network that
    cannot hold simultaneously, and a modification aimed at a network
    whose deployment is still in progress.
    """
    conflicts: list[tuple[str, str]] = []
    new_constraints = constraints_for(new)
    new_network = new.attributes.get("network_id")

    for record in active:
        if record.fulfilment.status not in _ACTIVE_STATUSES:
            continue
        if record.intent.id == new.id:
            continue

        other_network = record.intent.attributes.get("network_id") or record.subject_network_id
        if new_network and other_network and new_network == other_network:
            for c_new in new_constraints:
                for c_old in constraints_for(record.intent):
                    if _constraints_conflict(c_new, c_old):
                        conflicts.append(
                            (
                                record.intent.id,
                                f"constraint {c_new.metric} {c_new.comparator} {c_new.value} "
                                f"cannot hold with {c_old.metric} {c_old.comparator} "
                                f"{c_old.value} on {new_network}",
                            )
                        )

        if (
            new.intent_type is IntentType.MODIFICATION
            and record.intent.intent_type is IntentType.DEPLOYMENT
            and record.fulfilment.status == FulfilmentStatus.IN_PROGRESS
            and record.subject_network_id
            and record.subject_network_id == new_network
        ):
            conflicts.append(
                (
                    record.intent.id,
                    f"network {new_network} is still being deployed by intent "
                    f"{record.intent.id}",
                )
            )
    return conflicts


@dataclass(frozen=True)
class Report:
    """The four-section intent report."""

    subject_intent: str
    generated_at: datetime
    fulfilment_status: str
    achieved_vs_target: tuple[dict[str, Any], ...]
    feasibility: FeasibilityResult | None
    conflicts: tuple[dict[str, str], ...]

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "subject_intent": self.subject_intent,
            "generated_at": format_timestamp(self.generated_at),
            "fulfilment_status": self.fulfilment_status,
            "achieved_vs_target": [dict(row) for row in self.achieved_vs_target],
            "feasibility": self.feasibility.to_jsonable() if self.feasibility else None,
            "conflicts": [dict(c) for c in self.conflicts],
        }

    def to_text(self) -> str:
        lines = [
            f"Intent report for {self.subject_intent}",
            f"generated at {format_timestamp(self.generated_at)}",
            "",
            "Achieved vs. target",
            "-------------------",
        ]
        if self.achieved_vs_target:
            for row in self.achieved_vs_target:
                lines.append(
                    f"  {row['metric']}: achieved {row['achieved']} / target {row['target']}"
                )
        else:
            lines.append("  (no targets recorded)")
        lines += ["", "Feasibility", "-----------"]
        if self.feasibility:
            f = self.feasibility
            lines.append(
                f"  {f.verdict}: required {f.required_units}, available {f.available_units} "
                f"({f.detail})"
            )
        else:
            lines.append("  not applicable")
        lines += ["", "Conflicts", "---------"]
        if self.conflicts:
            for c in self.conflicts:
                lines.append(f"  with {c['intent_id']}: {c['reason']}")
        else:
            lines.append("  none")
        lines += ["", "Fulfillment status", "------------------", f"  {self.fulfilment_status}"]
        return "\n".join(lines)


EventSink = Callable[[str, dict[str, Any]], None]


class ExecutionEngine:
    """Single-writer executor over the simulated core.

    The caller provides the clock and id generator; nothing here reads
    wall time, so identical command sequences produce identical state.
    """

    def __init__(
        self,
        inventory: Inventory,
        clock,
        id_generator: IdGenerator,
        event_sink: EventSink | None = None,
    ) -> None:
        self.inventory = inventory
        self._clock = clock
        self._ids = id_generator
        self._sink = event_sink or (lambda kind, payload: None)
        self.records: dict[str, IntentRecord] = {}
        self.subscriptions: dict[str, NotificationSubscription] = {}
        self._monitors: list[str] = []
        self._pending_activation: list[tuple[str, str]] = []  # (network_id, intent_id)

    # ------------------------------------------------------------------
    # lifecycle plumbing
    # ------------------------------------------------------------------

    def _transition(self, record: IntentRecord, new_status: str) -> None:
        old = record.fulfilment.status
        if new_status == old:
            return
        if new_status not in LEGAL_TRANSITIONS[old]:
            raise IllegalTransition(f"{old} -> {new_status} on {record.intent.id}")
        record.fulfilment.status = new_status
        record.updated_at = self._clock.now()
        self._sink(
            "fulfilment_transition",
            {
                "intent_id": record.intent.id,
                "from": old,
                "to": new_status,
                "session_id": record.session_id,
            },
        )

    def get_record(self, intent_id: str) -> IntentRecord:
        try:
            return self.records[intent_id]
        except KeyError:
            raise UnknownIntentId(intent_id) from None

    def get_intent(self, intent_id: str) -> StructuredIntent | None:
        record = self.records.get(intent_id)
        return record.intent if record else None

    # ------------------------------------------------------------------
    # submission and execution
    # ------------------------------------------------------------------

    def submit(
        self,
        intent: StructuredIntent,
        policy: PolicyDocument,
        session_id: str | None = None,
    ) -> IntentRecord:
        """Register a pending record, computing conflicts on entry."""
        now = self._clock.now()
        record = IntentRecord(
            intent=intent,
            policy=policy,
            fulfilment=FulfilmentInfo(),
            created_at=now,
            updated_at=now,
            session_id=session_id,
        )
        conflicts = detect_conflicts(intent, self.records.values())
        record.fulfilment.conflicts = list(conflicts)
        for other_id, reason in conflicts:
            other = self.records.get(other_id)
            if other is not None:
                other.fulfilment.conflicts.append((intent.id, reason))
        self.records[intent.id] = record
        return record

    def execute(self, record: IntentRecord) -> IntentRecord:
        """Run one pending record to its post-execution status."""
        if record.fulfilment.status != FulfilmentStatus.PENDING:
            raise IllegalTransition(
                f"execute requires a Pending record, got {record.fulfilment.status}"
            )
        handler = {
            IntentType.DEPLOYMENT: self._execute_deployment,
            IntentType.MODIFICATION: self._execute_modification,
            IntentType.PERFORMANCE_ASSURANCE: self._execute_assurance,
            IntentType.INTENT_REPORT_REQUEST: self._execute_report,
            IntentType.INTENT_FEASIBILITY_CHECK: self._execute_feasibility,
            IntentType.REGULAR_NOTIFICATION_REQUEST: self._execute_notification,
        }[record.intent.intent_type]
        handler(record)
        self.inventory.check_invariant()
        return record

    def _fail(self, record: IntentRecord, reason: str) -> None:
        record.fulfilment.failure_reason = reason
        self._transition(record, FulfilmentStatus.FAILED)

    def _execute_deployment(self, record: IntentRecord) -> None:
        attrs = record.intent.attributes
        try:
            feasibility = check_feasibility(record.intent, self.inventory)
        except UnknownRegion as exc:
            self._fail(record, f"UnknownRegion: {exc.args[0]}")
            return
        record.fulfilment.feasibility = feasibility
        units = int(attrs.get("capacity_target", DEFAULT_CAPACITY_UNITS))
        record.fulfilment.targets["capacity_units"] = units
        if feasibility.verdict == "infeasible":
            self._transition(record, FulfilmentStatus.INFEASIBLE)
            return
        network = NetworkRecord(
            id=self._ids.new_id(),
            region=attrs["region"],
            network_type=attrs.get("network_type", "5g-core"),
            plmn_id=attrs.get("plmn_id"),
            capacity_units=units,
            registered_users=0,
            max_users=units * USERS_PER_CAPACITY_UNIT,
            pdu_sessions=0,
            status=NetworkStatus.DEPLOYING,
        )
        self.inventory.add_network(network)
        record.subject_network_id = network.id
        self._pending_activation.append((network.id, record.intent.id))
        self._transition(record, FulfilmentStatus.IN_PROGRESS)

    def _execute_modification(self, record: IntentRecord) -> None:
        attrs = record.intent.attributes
        try:
            network = self.inventory.network(attrs["network_id"])
        except UnknownNetwork as exc:
            self._fail(record, f"UnknownNetwork: {exc.args[0]}")
            return
        record.subject_network_id = network.id
        feasibility = check_feasibility(record.intent, self.inventory)
        record.fulfilment.feasibility = feasibility
        if feasibility.verdict == "infeasible":
            self._transition(record, FulfilmentStatus.INFEASIBLE)
            return
        if "capacity_target" in attrs:
            network.capacity_units = int(attrs["capacity_target"])
            network.max_users = network.capacity_units * USERS_PER_CAPACITY_UNIT
            # shrinking capacity detaches whatever no longer fits
            network.registered_users = min(network.registered_users, network.max_users)
            network.pdu_sessions = min(
                network.pdu_sessions,
                network.capacity_units * PDU_SESSIONS_PER_CAPACITY_UNIT,
            )
            record.fulfilment.targets["capacity_units"] = network.capacity_units
            record.fulfilment.achieved["capacity_units"] = network.capacity_units
        if "network_type" in attrs:
            network.network_type = attrs["network_type"]
        if "plmn_id" in attrs:
            network.plmn_id = attrs["plmn_id"]
        self._transition(record, FulfilmentStatus.FULFILLED)

    def _execute_assurance(self, record: IntentRecord) -> None:
        attrs = record.intent.attributes
        try:
            self.inventory.network(attrs["network_id"])
        except UnknownNetwork as exc:
            self._fail(record, f"UnknownNetwork: {exc.args[0]}")
            return
        record.subject_network_id = attrs["network_id"]
        for constraint in constraints_for(record.intent):
            record.fulfilment.targets[constraint.metric] = constraint.value
        self._monitors.append(record.intent.id)
        self._transition(record, FulfilmentStatus.IN_PROGRESS)
        self._evaluate_monitor(record)

    def _execute_report(self, record: IntentRecord) -> None:
        subject = record.intent.attributes["subject_intent"]
        try:
            report = self.generate_report(subject)
        except UnknownIntentId as exc:
            self._fail(record, f"UnknownIntent: {exc.args[0]}")
            return
        record.report = report.to_jsonable()
        self._transition(record, FulfilmentStatus.FULFILLED)

    def _execute_feasibility(self, record: IntentRecord) -> None:
        attrs = record.intent.attributes
        try:
            if "region" in attrs:
                feasibility = check_feasibility(record.intent, self.inventory)
            else:
                subject = self.get_record(attrs["subject_intent"])
                feasibility = check_feasibility(subject.intent, self.inventory)
        except UnknownRegion as exc:
            self._fail(record, f"UnknownRegion: {exc.args[0]}")
            return
        except (UnknownNetwork, UnknownIntentId) as exc:
            self._fail(record, f"UnknownSubject: {exc.args[0]}")
            return
        record.fulfilment.feasibility = feasibility
        self._transition(record, FulfilmentStatus.FULFILLED)

    def _execute_notification(self, record: IntentRecord) -> None:
        attrs = record.intent.attributes
        if "network_id" in attrs:
            subject_kind, subject_id = "network", attrs["network_id"]
            if subject_id not in self.inventory.networks:
                self._fail(record, f"UnknownNetwork: {subject_id}")
                return
            record.subject_network_id = subject_id
        else:
            subject_kind, subject_id = "intent", attrs["subject_intent"]
            if subject_id not in self.records:
                self._fail(record, f"UnknownIntent: {subject_id}")
                return
        frequency = parse_duration(attrs["frequency"])
        now = self._clock.now()
        subscription = NotificationSubscription(
            id=self._ids.new_id(),
            subject_kind=subject_kind,
            subject_id=subject_id,
            frequency_seconds=frequency,
            next_fire=now + timedelta(seconds=frequency),
            source_intent_id=record.intent.id,
        )
        self.subscriptions[subscription.id] = subscription
        record.fulfilment.targets["frequency_seconds"] = frequency
        self._transition(record, FulfilmentStatus.FULFILLED)

    # ------------------------------------------------------------------
    # monitors, activation, notifications
    # ------------------------------------------------------------------

    def _evaluate_monitor(self, record: IntentRecord) -> None:
        network = self.inventory.networks.get(record.intent.attributes["network_id"])
        if network is None:
            self._fail(record, "UnknownNetwork: monitored network disappeared")
            return
        all_hold = True
        for constraint in constraints_for(record.intent):
            actual = network.metric(constraint.metric)
            record.fulfilment.achieved[constraint.metric] = actual
            if not _constraint_holds(constraint, actual):
                all_hold = False
        target = FulfilmentStatus.FULFILLED if all_hold else FulfilmentStatus.DEGRADED
        if record.fulfilment.status != target:
            self._transition(record, target)

    def tick(self, now: datetime) -> list[Notification]:
        """One scheduler step at logical time ``now``.

        Activates freshly deployed networks, re-evaluates performance
        monitors, then fires every due notification, catching up whole
        multiples of the frequency (fire times never drift).
        """
        if now < self._clock.now():
            raise ValueError("scheduler time cannot move backwards")

        for network_id, intent_id in self._pending_activation:
            network = self.inventory.networks[network_id]
            network.status = NetworkStatus.ACTIVE
            record = self.records[intent_id]
            record.fulfilment.achieved["capacity_units"] = network.capacity_units
            self._transition(record, FulfilmentStatus.FULFILLED)
            self._sink(
                "network_activated",
                {"network_id": network_id, "intent_id": intent_id, "session_id": record.session_id},
            )
        self._pending_activation.clear()

        for intent_id in self._monitors:
            record = self.records[intent_id]
            if record.fulfilment.status in (
                FulfilmentStatus.FULFILLED,
                FulfilmentStatus.DEGRADED,
            ):
                self._evaluate_monitor(record)

        notifications: list[Notification] = []
        for sub_id in sorted(self.subscriptions):
            subscription = self.subscriptions[sub_id]
            if not subscription.active:
                continue
            while subscription.next_fire <= now:
                notifications.append(
                    Notification(
                        subscription_id=subscription.id,
                        subject_kind=subscription.subject_kind,
                        subject_id=subscription.subject_id,
                        fired_at=subscription.next_fire,
                        status=self._subject_status(subscription),
                    )
                )
                subscription.next_fire += timedelta(seconds=subscription.frequency_seconds)
        for notification in notifications:
            source = self.subscriptions[notification.subscription_id].source_intent_id
            record = self.records.get(source) if source else None
            self._sink(
                "notification",
                {
                    **notification.to_jsonable(),
                    "session_id": record.session_id if record else None,
                },
            )
        return notifications

    def _subject_status(self, subscription: NotificationSubscription) -> str:
        if subscription.subject_kind == "intent":
            record = self.records.get(subscription.subject_id)
            return record.fulfilment.status if record else "unknown"
        network = self.inventory.networks.get(subscription.subject_id)
        return network.status if network else "unknown"

    # ------------------------------------------------------------------
    # reports and snapshots
    # ------------------------------------------------------------------

    def generate_report(self, subject_intent_id: str) -> Report:
        record = self.get_record(subject_intent_id)
        fulfilment = record.fulfilment
        rows = tuple(
            {
                "metric": metric,
                "achieved": fulfilment.achieved.get(metric),
                "target": target,
            }
            for metric, target in sorted(fulfilment.targets.items())
        )
        return Report(
            subject_intent=subject_intent_id,
            generated_at=self._clock.now(),
            fulfilment_status=fulfilment.status,
            achieved_vs_target=rows,
            feasibility=fulfilment.feasibility,
            conflicts=tuple(
                {"intent_id": cid, "reason": reason} for cid, reason in fulfilment.conflicts
            ),
        )

    def state_jsonable(self) -> dict[str, Any]:
        """Full engine state snapshot for replay-equality checks."""
        return {
            "inventory": self.inventory.to_jsonable(),
            "records": {
                intent_id: self.records[intent_id].to_jsonable()
                for intent_id in sorted(self.records)
            },
            "subscriptions": {
                sub_id: self.subscriptions[sub_id].to_jsonable()
                for sub_id in sorted(self.subscriptions)
            },
            "now": format_timestamp(self._clock.now()),
        }


def _constraint_holds(constraint: Constraint, actual: Any) -> bool:
    if constraint.comparator == ">=":
        return actual >= constraint.value
    if constraint.comparator == "<=":
        return actual <= constraint.value
    return actual == constraint.value


def load_inventory(path) -> Inventory:
    """Read the inventory bootstrap file (canonical JSON)."""
    import json
    from pathlib import Path

    return Inventory.from_jsonable(json.loads(Path(path).read_text(encoding="utf-8")))
