"""Gateway service pipeline tests (no HTTP): orchestration and persistence."""

import pytest

from intent_gate.gateway.config import GatewayConfig, load_config
from intent_gate.gateway.service import BackendUnavailable, GatewayService
from intent_gate.execution import FulfilmentStatus
from intent_gate.extraction.transport import TransportError
from intent_gate.model import IntentType, OutcomeKind


def make_service(tmp_path=None, **overrides) -> GatewayService:
    kwargs = dict(random_seed=42)
    if tmp_path is not None:
        kwargs["event_log_path"] = str(tmp_path / "events.log")
    kwargs.update(overrides)
    return GatewayService(GatewayConfig(**kwargs))


class TestHandleRequest:
    def test_modification_request_executes(self):
        service = make_service()
        sid = service.create_session()
        outcome = service.handle_request(
            sid, "Modify the existing network net-1 to address the performance issues."
        )
        assert outcome.extraction.intent_types == {IntentType.MODIFICATION}
        assert len(outcome.intent_record_ids) == 1
        record = service.get_intent_record(outcome.intent_record_ids[0])
        assert record["fulfilment"]["status"] == FulfilmentStatus.FULFILLED

    def test_compound_request_creates_three_records(self):
        service = make_service()
        sid = service.create_session()
        outcome = service.handle_request(
            sid,
            "Modify net-1 to resolve the high load problems, make sure it can "
            "support 5000 registered users, and notify me of its status every "
            "30 minutes.",
        )
        assert len(outcome.intent_record_ids) == 3
        types = {s.intent_type for s in outcome.structured}
        assert types == {
            IntentType.MODIFICATION,
            IntentType.PERFORMANCE_ASSURANCE,
            IntentType.REGULAR_NOTIFICATION_REQUEST,
        }

    def test_notification_without_frequency_gets_default_and_notice(self):
        service = make_service()
        sid = service.create_session()
        outcome = service.handle_request(sid, "Notify me about net-1.")
        (intent,) = outcome.structured
        assert intent.intent_type is IntentType.REGULAR_NOTIFICATION_REQUEST
        assert intent.attributes["frequency"] == "PT15M"
        assert any("PT15M" in notice for notice in outcome.notices)

    def test_sentinels_short_circuit_without_execution(self):
        service = make_service()
        sid = service.create_session()
        for text, kind in [
            ("What is the weather like today?", OutcomeKind.NO_INTENT_PRESENT),
            ("Restart my home router.", OutcomeKind.UNKNOWN_INTENT),
        ]:
            outcome = service.handle_request(sid, text)
            assert outcome.extraction.kind is kind
            assert outcome.intent_record_ids == []
        assert service.engine.records == {}

    def test_clarification_on_missing_attribute(self):
        service = make_service()
        sid = service.create_session()
        outcome = service.handle_request(sid, "Deploy a new network immediately.")
        assert outcome.clarification is not None
        assert "region" in outcome.clarification.lower()
        assert outcome.intent_record_ids == []

    def test_clarification_iff_missing_attribute(self):
        service = make_service()
        sid = service.create_session()
        ok = service.handle_request(sid, "Deploy a new network in RegionB.")
        assert ok.clarification is None

    def test_report_resolves_previous_request(self):
        service = make_service()
        sid = service.create_session()
        deploy = service.handle_request(sid, "Deploy a new network in RegionB.")
        report_outcome = service.handle_request(
            sid, "Please summarize the results of the previous request."
        )
        (report_intent,) = report_outcome.structured
        assert report_intent.attributes["subject_intent"] == deploy.intent_record_ids[0]
        record = service.get_intent_record(report_outcome.intent_record_ids[0])
        assert record["report"] is not None
        assert record["fulfilment"]["status"] == FulfilmentStatus.FULFILLED

    def test_report_without_history_asks_for_clarification(self):
        service = make_service()
        sid = service.create_session()
        outcome = service.handle_request(
            sid, "Please summarize the results of the previous request."
        )
        assert outcome.clarification is not None

    def test_session_auto_created_on_first_use(self):
        service = make_service()
        outcome = service.handle_request("fresh-session", "Deploy a new network in RegionB.")
        assert outcome.intent_record_ids
        assert service.sessions.get("fresh-session") is not None

    def test_deployment_fulfils_on_next_request_tick(self):
        service = make_service()
        sid = service.create_session()
        deploy = service.handle_request(sid, "Deploy a new network in RegionB.")
        record = service.get_intent_record(deploy.intent_record_ids[0])
        assert record["fulfilment"]["status"] == FulfilmentStatus.IN_PROGRESS
        service.handle_request(sid, "What is the weather like today?")
        record = service.get_intent_record(deploy.intent_record_ids[0])
        assert record["fulfilment"]["status"] == FulfilmentStatus.FULFILLED


class TestDeterminism:
    def test_identical_scripts_identical_outcomes(self):
        script = [
            "Deploy a new network in RegionB.",
            "Ensure that net-1 can support 5000 registered users.",
            "Please summarize the results of the previous request.",
        ]

        def run():
            service = make_service()
            sid = service.create_session()
            return [service.handle_request(sid, text).to_jsonable() for text in script]

        assert run() == run()


class TestEvents:
    def test_completion_event_emitted(self):
        service = make_service()
        sid = service.create_session()
        outcome = service.handle_request(sid, "Deploy a new network in RegionB.")
        kinds = [e["kind"] for e in service.events_for(sid)]
        assert "completion" in kinds
        completion = [e for e in service.events_for(sid) if e["kind"] == "completion"][-1]
        assert completion["payload"]["request_id"] == outcome.request_id

    def test_transition_and_notification_events_flow(self):
        service = make_service()
        sid = service.create_session()
        service.handle_request(sid, "Notify me of the status of net-1 every 10 minutes.")
        service.advance_clock(600)
        kinds = [e["kind"] for e in service.events_for(sid)]
        assert "notification" in kinds
        assert "fulfilment_transition" in kinds


class TestBackendFailure:
    class _DownTransport:
        deterministic = False

        def send(self, system, user):
            raise TransportError("endpoint down")

    def test_backend_unavailable_without_fallback(self, tmp_path):
        config = GatewayConfig(random_seed=1, backend="replay", replay_dir=str(tmp_path))
        service = GatewayService(config, transport=self._DownTransport())
        sid = service.create_session()
        with pytest.raises(BackendUnavailable):
            service.handle_request(sid, "Deploy a new network in RegionB.")

    def test_explicit_fallback_to_rules(self, tmp_path):
        config = GatewayConfig(
            random_seed=1,
            backend="replay",
            replay_dir=str(tmp_path),
            llm_fallback_to_rules=True,
        )
        service = GatewayService(config, transport=self._DownTransport())
        sid = service.create_session()
        outcome = service.handle_request(sid, "Deploy a new network in RegionB.")
        assert outcome.extraction.intent_types == {IntentType.DEPLOYMENT}


class TestPersistence:
    def test_restart_replays_to_identical_state(self, tmp_path):
        service = make_service(tmp_path)
        sid = service.create_session()
        service.handle_request(sid, "Deploy a new network in RegionB.")
        service.handle_request(sid, "Ensure net-1 can support 5000 registered users.")
        service.handle_request(sid, "Notify me of the status of net-1 every 10 minutes.")
        service.advance_clock(1200)
        before = service.state_snapshot()
        service.close()

        reborn = make_service(tmp_path)
        assert reborn.state_snapshot() == before
        reborn.close()

    def test_replayed_gateway_keeps_serving(self, tmp_path):
        service = make_service(tmp_path)
        sid = service.create_session()
        deploy = service.handle_request(sid, "Deploy a new network in RegionB.")
        service.close()

        reborn = make_service(tmp_path)
        outcome = reborn.handle_request(
            sid, "Please summarize the results of the previous request."
        )
        (intent,) = outcome.structured
        assert intent.attributes["subject_intent"] == deploy.intent_record_ids[0]
        reborn.close()


class TestConfig:
    def test_env_overrides(self, tmp_path):
        env = {
            "INTENT_GATE_BACKEND": "rule",
            "INTENT_GATE_LISTEN_PORT": "9999",
            "INTENT_GATE_RANDOM_SEED": "7",
            "INTENT_GATE_LLM_FALLBACK_TO_RULES": "true",
        }
        config = load_config(None, env)
        assert config.listen_port == 9999
        assert config.random_seed == 7
        assert config.llm_fallback_to_rules is True

    def test_file_plus_env_precedence(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"listen_port": 1234, "backend": "rule"}', encoding="utf-8")
        config = load_config(path, {"INTENT_GATE_LISTEN_PORT": "4321"})
        assert config.listen_port == 4321

    def test_llm_backend_requires_endpoint(self):
        with pytest.raises(ValueError):
            load_config(None, {"INTENT_GATE_BACKEND": "llm"})

    def test_replay_backend_requires_dir(self):
        with pytest.raises(ValueError):
            load_config(None, {"INTENT_GATE_BACKEND": "replay"})

    def test_unknown_config_field_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"nope": 1}', encoding="utf-8")
        with pytest.raises(ValueError):
            load_config(path, {})
