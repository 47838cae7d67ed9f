"""Session store, reference resolution, defaults, and event-log tests."""

from datetime import timedelta

import pytest

from intent_gate.clock import DEFAULT_EPOCH, LogicalClock
from intent_gate.context import (
    EventLog,
    ReferenceResolution,
    Session,
    SessionRequest,
    SessionStore,
    apply_defaults,
    resolve_reference,
)
from intent_gate.model import ExtractionOutcome, IntentType, StructuredIntent


def make_intent(intent_id, intent_type, attrs, request_id="r1"):
    return StructuredIntent(
        id=intent_id,
        intent_type=intent_type,
        attributes=attrs,
        source_request_id=request_id,
    )


def session_with(clock, *intent_specs):
    """Session whose history carries the given (id, type) intents in order."""
    session = Session(id="s1", created_at=clock.now())
    lookup = {}
    for i, (intent_id, intent_type, attrs) in enumerate(intent_specs):
        clock.advance(1)
        lookup[intent_id] = make_intent(intent_id, intent_type, attrs)
        session.append(
            SessionRequest(
                request_id=f"r{i}",
                text=f"request {i}",
                timestamp=clock.now(),
                outcome=ExtractionOutcome.no_intent(),
                structured_ids=(intent_id,),
            )
        )
    return session, lookup.get


class TestResolveReference:
    def test_previous_request_resolves_to_most_recent(self):
        session, lookup = session_with(
            LogicalClock(), ("d1", IntentType.DEPLOYMENT, {"region": "RegionA"})
        )
        resolution = resolve_reference(session, "summarize the previous request", lookup)
        assert resolution == ReferenceResolution.ok("d1")

    def test_empty_session_is_unresolved(self):
        session = Session(id="s1", created_at=DEFAULT_EPOCH)
        resolution = resolve_reference(session, "summarize the previous request")
        assert not resolution.resolved
        assert resolution.reason == "no prior request in session"

    def test_typed_reference_filters_by_type(self):
        session, lookup = session_with(
            LogicalClock(),
            ("d1", IntentType.DEPLOYMENT, {"region": "RegionA"}),
            ("m1", IntentType.MODIFICATION, {"network_id": "net-1"}),
        )
        resolution = resolve_reference(session, "status of the deployment", lookup)
        assert resolution == ReferenceResolution.ok("d1")
        # brute-force check: last matching id scanning backwards
        expected = None
        for sid in reversed(session.structured_ids()):
            if lookup(sid).intent_type is IntentType.DEPLOYMENT:
                expected = sid
                break
        assert resolution.intent_id == expected

    def test_typed_reference_most_recent_of_type(self):
        session, lookup = session_with(
            LogicalClock(),
            ("d1", IntentType.DEPLOYMENT, {"region": "RegionA"}),
            ("d2", IntentType.DEPLOYMENT, {"region": "RegionB"}),
        )
        resolution = resolve_reference(session, "the network creation", lookup)
        assert resolution.intent_id == "d2"

    def test_missing_type_in_history_unresolved(self):
        session, lookup = session_with(
            LogicalClock(), ("m1", IntentType.MODIFICATION, {"network_id": "net-1"})
        )
        resolution = resolve_reference(session, "status of the deployment", lookup)
        assert not resolution.resolved

    def test_never_returns_id_outside_session(self):
        session, lookup = session_with(
            LogicalClock(),
            ("d1", IntentType.DEPLOYMENT, {"region": "RegionA"}),
            ("m1", IntentType.MODIFICATION, {"network_id": "net-1"}),
        )
        for phrase in ("previous request", "the deployment", "the modification", "anything"):
            resolution = resolve_reference(session, phrase, lookup)
            if resolution.resolved:
                assert resolution.intent_id in session.structured_ids()


class TestApplyDefaults:
    def test_notification_frequency_defaults(self):
        intent = make_intent(
            "n1", IntentType.REGULAR_NOTIFICATION_REQUEST, {"network_id": "net-1"}
        )
        filled = apply_defaults(intent)
        assert filled.attributes["frequency"] == "PT15M"
        assert len(filled.assumed_defaults) == 1
        assert "PT15M" in filled.assumed_defaults[0].notice

    def test_assurance_window_defaults(self):
        intent = make_intent(
            "p1",
            IntentType.PERFORMANCE_ASSURANCE,
            {"network_id": "net-1", "registered_users_target": 100},
        )
        filled = apply_defaults(intent)
        assert filled.attributes["evaluation_window"] == "PT5M"

    def test_complete_intent_unchanged(self):
        intent = make_intent(
            "n1",
            IntentType.REGULAR_NOTIFICATION_REQUEST,
            {"network_id": "net-1", "frequency": "PT30M"},
        )
        assert apply_defaults(intent) is intent

    def test_non_defaultable_left_absent(self):
        intent = make_intent("d1", IntentType.DEPLOYMENT, {"capacity_target": 5})
        filled = apply_defaults(intent)
        assert "region" not in filled.attributes

    def test_idempotent(self):
        intent = make_intent(
            "n1", IntentType.REGULAR_NOTIFICATION_REQUEST, {"network_id": "net-1"}
        )
        once = apply_defaults(intent)
        twice = apply_defaults(once)
        assert once == twice


class TestSessionStore:
    def test_create_get_and_duplicate(self):
        store = SessionStore()
        store.create("s1", DEFAULT_EPOCH)
        assert store.get("s1").id == "s1"
        with pytest.raises(ValueError):
            store.create("s1", DEFAULT_EPOCH)

    def test_history_is_append_only_ordered(self):
        clock = LogicalClock()
        session = Session(id="s1", created_at=clock.now())
        clock.advance(10)
        session.append(
            SessionRequest("r1", "a", clock.now(), ExtractionOutcome.no_intent(), ())
        )
        with pytest.raises(ValueError):
            session.append(
                SessionRequest(
                    "r2",
                    "b",
                    clock.now() - timedelta(seconds=5),
                    ExtractionOutcome.no_intent(),
                    (),
                )
            )

    def test_ttl_expiry(self):
        clock = LogicalClock()
        store = SessionStore(ttl_seconds=3600)
        store.create("old", clock.now())
        clock.advance(3601)
        store.create("fresh", clock.now())
        expired = store.prune_expired(clock.now())
        assert expired == ["old"]
        assert store.get("old") is None
        assert store.get("fresh") is not None


class TestEventLog:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "events.log"
        log = EventLog(path)
        log.append(DEFAULT_EPOCH, "s1", "session_created", {"session_id": "s1"})
        log.append(DEFAULT_EPOCH, "s1", "request_handled", {"request_id": "r1"})
        log.close()

        events = list(EventLog.read_events(path))
        assert [e["event_kind"] for e in events] == ["session_created", "request_handled"]
        assert events[0]["ts"] == "2025-01-01T00:00:00Z"

    def test_append_survives_reopen(self, tmp_path):
        path = tmp_path / "events.log"
        log = EventLog(path)
        log.append(DEFAULT_EPOCH, "s1", "session_created", {})
        log.close()
        log2 = EventLog(path)
        log2.append(DEFAULT_EPOCH, "s1", "request_handled", {})
        log2.close()
        assert len(list(EventLog.read_events(path))) == 2

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "bogus.log"
        path.write_text('{"format":"something-else","version":1}\n', encoding="utf-8")
        with pytest.raises(ValueError):
            list(EventLog.read_events(path))
