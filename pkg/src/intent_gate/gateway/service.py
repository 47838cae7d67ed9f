"""Gateway orchestration: extraction, context, transform, execution.

One service instance owns the whole pipeline and serializes all mutation
behind a lock (single-writer discipline over the engine and sessions).
Time is purely logical: in deterministic mode (random_seed set) the clock
advances one second per handled request plus explicit advances; in live
mode a ticker keeps the logical clock synced to wall time. Either way the
core never reads the wall clock itself.

Every state-changing command is appended to the event log; replaying the
log against the same initial inventory rebuilds bit-identical state.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable, Iterator, Mapping

from intent_gate.canon import format_timestamp
from intent_gate.clock import LogicalClock
from intent_gate.context import EventLog, SessionRequest, SessionStore, resolve_reference
from intent_gate.execution import (
    ExecutionEngine,
    Inventory,
    Report,
    load_inventory,
)
from intent_gate.extraction.llm import LlmExtractor
from intent_gate.extraction.prompt import default_prompt_spec, load_prompt_spec
from intent_gate.extraction.rules import Lexicon, RuleBasedExtractor
from intent_gate.extraction.transport import (
    HttpChatTransport,
    ReplayTransport,
    TransportError,
)
from intent_gate.gateway.config import GatewayConfig
from intent_gate.ids import IdGenerator
from intent_gate.model import (
    EntityKind,
    ExtractionOutcome,
    IntentType,
    StructuredIntent,
)
from intent_gate.extraction.entities import extract_entities
from intent_gate.transform import (
    MissingAttribute,
    PolicyDocument,
    compile_policy,
    to_structured,
)


class BackendUnavailable(RuntimeError):
    """The configured extraction backend failed and no fallback applies."""


@dataclass
class RequestOutcome:
    """Everything the gateway tells the user about one request."""

    request_id: str
    extraction: ExtractionOutcome
    structured: list[StructuredIntent] = field(default_factory=list)
    clarification: str | None = None
    intent_record_ids: list[str] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "request_id": self.request_id,
            "extraction": self.extraction.to_jsonable(),
            "structured": [s.to_jsonable() for s in self.structured],
            "clarification": self.clarification,
            "intent_record_ids": list(self.intent_record_ids),
            "notices": list(self.notices),
        }


_EVENT_BUFFER_LIMIT = 1000

#: Intent types whose subject may be a back-reference to session history.
_RESOLUTION_TYPES = frozenset(
    {
        IntentType.INTENT_REPORT_REQUEST,
        IntentType.INTENT_FEASIBILITY_CHECK,
        IntentType.REGULAR_NOTIFICATION_REQUEST,
    }
)


class GatewayService:
    """The interface component: sessions in, records and events out."""

    def __init__(self, config: GatewayConfig, transport: Any | None = None) -> None:
        self.config = config
        self.deterministic = config.random_seed is not None
        self._lock = threading.RLock()

        self._lexicon = (
            Lexicon.load(config.lexicon_path) if config.lexicon_path else Lexicon.bundled()
        )
        self._rule_backend = RuleBasedExtractor(self._lexicon)
        self._backend = self._make_backend(config, transport)

        inventory = self._load_initial_inventory(config)
        self._initial_inventory_json = inventory.to_jsonable()

        self._events: list[dict[str, Any]] = []
        self._events_cond = threading.Condition(self._lock)
        self._event_seq = 0

        self.sessions = SessionStore(ttl_seconds=config.session_ttl_seconds)
        self._log: EventLog | None = None

        replay_events: list[dict[str, Any]] = []
        if config.event_log_path:
            from pathlib import Path

            if Path(config.event_log_path).exists():
                replay_events = list(EventLog.read_events(config.event_log_path))

        engine_seed, epoch = self._boot_parameters(replay_events)
        self.clock = LogicalClock(epoch)
        self._ids = IdGenerator(self.clock, seed=config.random_seed)
        self.engine = ExecutionEngine(
            inventory=inventory,
            clock=self.clock,
            id_generator=IdGenerator(self.clock, seed=engine_seed),
            event_sink=self._engine_event,
        )

        if replay_events:
            self._replay(replay_events)
        if config.event_log_path:
            self._log = EventLog(config.event_log_path)
            if not replay_events:
                self._log_event(
                    None,
                    "boot",
                    {"engine_seed": engine_seed, "epoch": format_timestamp(epoch)},
                )

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    def _make_backend(self, config: GatewayConfig, transport: Any | None):
        if config.backend == "rule":
            return self._rule_backend
        spec = (
            load_prompt_spec(config.prompt_spec_path)
            if config.prompt_spec_path
            else default_prompt_spec()
        )
        if config.backend == "replay":
            transport = transport or ReplayTransport(config.replay_dir)
        else:
            transport = transport or HttpChatTransport(
                endpoint=config.llm_endpoint,
                model=config.llm_model,
                temperature=config.llm_temperature,
                retries=config.llm_retries,
            )
        return LlmExtractor(transport, spec)

    @staticmethod
    def _load_initial_inventory(config: GatewayConfig) -> Inventory:
        if config.inventory_path:
            return load_inventory(config.inventory_path)
        import json

        raw = resources.files("intent_gate.data").joinpath("inventory.default.json")
        return Inventory.from_jsonable(json.loads(raw.read_text("utf-8")))

    def _boot_parameters(self, replay_events: list[dict[str, Any]]) -> tuple[int, Any]:
        """(engine id seed, clock epoch), recovered from the log on restart.

        Both are persisted in the boot event so replaying a log rebuilds
        identical ids and timestamps even for unseeded live runs.
        """
        from intent_gate.canon import parse_timestamp
        from intent_gate.clock import DEFAULT_EPOCH, WallClock

        for event in replay_events:
            if event["event_kind"] == "boot":
                return (
                    int(event["payload"]["engine_seed"]),
                    parse_timestamp(event["payload"]["epoch"]),
                )
        if self.config.random_seed is not None:
            return self.config.random_seed + 1, DEFAULT_EPOCH
        return (
            random.SystemRandom().getrandbits(48),
            WallClock().now().replace(microsecond=0),
        )

    # ------------------------------------------------------------------
    # event plumbing
    # ------------------------------------------------------------------

    def _engine_event(self, kind: str, payload: dict[str, Any]) -> None:
        self._emit(kind, payload.get("session_id"), payload)

    def _emit(self, kind: str, session_id: str | None, payload: Mapping[str, Any]) -> None:
        with self._events_cond:
            self._event_seq += 1
            body = dict(payload)
            body.pop("session_id", None)
            self._events.append(
                {
                    "seq": self._event_seq,
                    "ts": format_timestamp(self.clock.now()),
                    "kind": kind,
                    "session_id": session_id,
                    "payload": body,
                }
            )
            if len(self._events) > _EVENT_BUFFER_LIMIT:
                del self._events[: len(self._events) - _EVENT_BUFFER_LIMIT]
            self._events_cond.notify_all()

    def events_for(self, session_id: str, after_seq: int = 0) -> list[dict[str, Any]]:
        with self._lock:
            return [
                e for e in self._events if e["session_id"] == session_id and e["seq"] > after_seq
            ]

    def wait_for_events(
        self, session_id: str, after_seq: int, timeout: float
    ) -> list[dict[str, Any]]:
        """Block until events past ``after_seq`` exist for the session."""
        with self._events_cond:
            ready = self.events_for(session_id, after_seq)
            if ready:
                return ready
            self._events_cond.wait(timeout)
            return self.events_for(session_id, after_seq)

    def _log_event(self, session_id: str | None, kind: str, payload: Mapping[str, Any]) -> None:
        if self._log is not None:
            self._log.append(self.clock.now(), session_id, kind, payload)

    # ------------------------------------------------------------------
    # public operations
    # ------------------------------------------------------------------

    def create_session(self, session_id: str | None = None) -> str:
        with self._lock:
            sid = session_id or self._ids.new_id()
            self.sessions.create(sid, self.clock.now())
            self._log_event(sid, "session_created", {})
            return sid

    def advance_clock(self, seconds: int) -> str:
        """Move logical time forward and run one scheduler step."""
        with self._lock:
            now = self._advance(seconds)
            self._log_event(None, "clock_advanced", {"seconds": seconds})
            return format_timestamp(now)

    def _advance(self, seconds: int):
        now = self.clock.advance(seconds)
        self.engine.tick(now)
        return now

    def handle_request(self, session_id: str, text: str) -> RequestOutcome:
        """The full pipeline: interface -> interpretation -> execution."""
        with self._lock:
            if self.deterministic:
                self._advance(1)
                self._log_event(None, "clock_advanced", {"seconds": 1})
            now = self.clock.now()
            self.sessions.prune_expired(now)
            created = self.sessions.get(session_id) is None
            session = self.sessions.get_or_create(session_id, now)
            if created:
                self._log_event(session_id, "session_created", {})

            outcome = self._classify(text)
            request_id = self._ids.new_id()
            result = RequestOutcome(request_id=request_id, extraction=outcome)

            policies: list[PolicyDocument] = []
            if not outcome.is_sentinel():
                entities = extract_entities(text)
                for detected in outcome.intents:
                    resolution = None
                    if detected.intent_type in _RESOLUTION_TYPES and self._needs_resolution(
                        detected.intent_type, entities
                    ):
                        resolution = resolve_reference(session, text, self.engine.get_intent)
                    try:
                        intent = to_structured(
                            detected,
                            entities,
                            resolution,
                            intent_id=self._ids.new_id(),
                            source_request_id=request_id,
                        )
                    except MissingAttribute as exc:
                        if result.clarification is None:
                            result.clarification = exc.question
                        continue
                    policy = compile_policy(intent, policy_id=self._ids.new_id())
                    record = self.engine.submit(intent, policy, session_id=session.id)
                    self.engine.execute(record)
                    policies.append(policy)
                    result.structured.append(intent)
                    result.intent_record_ids.append(intent.id)
                    result.notices.extend(a.notice for a in intent.assumed_defaults)

            session.append(
                SessionRequest(
                    request_id=request_id,
                    text=text,
                    timestamp=now,
                    outcome=outcome,
                    structured_ids=tuple(result.intent_record_ids),
                )
            )
            self._log_event(
                session_id,
                "request_handled",
                {
                    "request_id": request_id,
                    "text": text,
                    "outcome": outcome.to_jsonable(),
                    "structured": [s.to_jsonable() for s in result.structured],
                    "policies": [p.to_jsonable() for p in policies],
                    "clarification": result.clarification,
                    "notices": list(result.notices),
                },
            )
            self._emit(
                "completion",
                session_id,
                {
                    "request_id": request_id,
                    "intent_record_ids": list(result.intent_record_ids),
                    "statuses": {
                        rid: self.engine.records[rid].fulfilment.status
                        for rid in result.intent_record_ids
                    },
                },
            )
            return result

    def _classify(self, text: str) -> ExtractionOutcome:
        try:
            return self._backend.classify(text)
        except TransportError as exc:
            if self.config.llm_fallback_to_rules:
                return self._rule_backend.classify(text)
            raise BackendUnavailable(str(exc)) from exc

    @staticmethod
    def _needs_resolution(intent_type: IntentType, entities) -> bool:
        kinds = {e.kind for e in entities}
        if intent_type is IntentType.INTENT_REPORT_REQUEST:
            return True
        if intent_type is IntentType.INTENT_FEASIBILITY_CHECK:
            return EntityKind.REGION not in kinds
        return EntityKind.NETWORK_ID not in kinds

    # ------------------------------------------------------------------
    # reads
    # ------------------------------------------------------------------

    def get_intent_record(self, intent_id: str) -> dict[str, Any]:
        with self._lock:
            return self.engine.get_record(intent_id).to_jsonable()

    def get_report(self, intent_id: str) -> Report:
        with self._lock:
            return self.engine.generate_report(intent_id)

    def inventory_snapshot(self) -> dict[str, Any]:
        with self._lock:
            return self.engine.inventory.to_jsonable()

    def state_snapshot(self) -> dict[str, Any]:
        """Engine plus session state; replay-equality checks compare this."""
        with self._lock:
            return {
                "engine": self.engine.state_jsonable(),
                "sessions": self.sessions.to_jsonable(),
            }

    def initial_inventory(self) -> dict[str, Any]:
        return self._initial_inventory_json

    # ------------------------------------------------------------------
    # replay
    # ------------------------------------------------------------------

    def _replay(self, events: list[dict[str, Any]]) -> None:
        """Rebuild session and engine state from a prior run's log."""
        for event in events:
            kind = event["event_kind"]
            payload = event["payload"]
            if kind == "boot":
                continue
            if kind == "clock_advanced":
                self._advance(int(payload["seconds"]))
            elif kind == "session_created":
                if self.sessions.get(event["session_id"]) is None:
                    self.sessions.create(event["session_id"], self.clock.now())
            elif kind == "request_handled":
                self._replay_request(event["session_id"], payload)

    def _replay_request(self, session_id: str, payload: Mapping[str, Any]) -> None:
        session = self.sessions.get_or_create(session_id, self.clock.now())
        outcome = ExtractionOutcome.from_jsonable(payload["outcome"])
        structured = [StructuredIntent.from_jsonable(s) for s in payload["structured"]]
        policies = [PolicyDocument.from_jsonable(p) for p in payload["policies"]]
        for intent, policy in zip(structured, policies):
            record = self.engine.submit(intent, policy, session_id=session_id)
            self.engine.execute(record)
        session.append(
            SessionRequest(
                request_id=payload["request_id"],
                text=payload["text"],
                timestamp=self.clock.now(),
                outcome=outcome,
                structured_ids=tuple(s.id for s in structured),
            )
        )

    def close(self) -> None:
        if self._log is not None:
            self._log.close()
