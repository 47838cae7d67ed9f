"""HTTP round-trip tests against a live server on an ephemeral port."""

import json
import threading

import pytest
import requests

from intent_gate.gateway.config import GatewayConfig
from intent_gate.gateway.httpd import make_server
from intent_gate.gateway.service import GatewayService


@pytest.fixture()
def server():
    config = GatewayConfig(listen_host="127.0.0.1", listen_port=0, random_seed=42)
    service = GatewayService(config)
    httpd = make_server(service)
    config.listen_port = httpd.server_address[1]
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{config.listen_port}"
    yield base, service
    httpd.shutdown()
    httpd.server_close()
    service.close()


def create_session(base):
    resp = requests.post(f"{base}/v1/sessions", json={}, timeout=10)
    assert resp.status_code == 201
    return resp.json()["session_id"]


def submit(base, session_id, text):
    resp = requests.post(
        f"{base}/v1/sessions/{session_id}/requests", json={"text": text}, timeout=10
    )
    return resp


class TestEndpoints:
    def test_healthz(self, server):
        base, _ = server
        resp = requests.get(f"{base}/v1/healthz", timeout=10)
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok"}

    def test_session_and_request_flow(self, server):
        base, _ = server
        sid = create_session(base)
        resp = submit(base, sid, "Deploy a new network in RegionB.")
        assert resp.status_code == 200
        outcome = resp.json()
        assert outcome["extraction"]["kind"] == "intents"
        assert len(outcome["intent_record_ids"]) == 1

        intent_id = outcome["intent_record_ids"][0]
        record = requests.get(f"{base}/v1/intents/{intent_id}", timeout=10).json()
        assert record["fulfilment"]["status"] == "InProgress"

        requests.post(f"{base}/v1/clock/advance", json={"seconds": 1}, timeout=10)
        record = requests.get(f"{base}/v1/intents/{intent_id}", timeout=10).json()
        assert record["fulfilment"]["status"] == "Fulfilled"

    def test_report_endpoint(self, server):
        base, _ = server
        sid = create_session(base)
        outcome = submit(base, sid, "Ensure net-1 can support 5000 registered users.").json()
        intent_id = outcome["intent_record_ids"][0]
        resp = requests.get(f"{base}/v1/intents/{intent_id}/report", timeout=10)
        assert resp.status_code == 200
        body = resp.json()
        assert body["report"]["fulfilment_status"] == "Degraded"
        assert "Achieved vs. target" in body["text"]

    def test_networks_snapshot(self, server):
        base, _ = server
        resp = requests.get(f"{base}/v1/networks", timeout=10)
        assert resp.status_code == 200
        body = resp.json()
        assert "region_capacity" in body
        assert any(n["id"] == "net-1" for n in body["networks"])

    def test_unknown_intent_404(self, server):
        base, _ = server
        resp = requests.get(f"{base}/v1/intents/nope", timeout=10)
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_intent"

    def test_bad_body_400(self, server):
        base, _ = server
        sid = create_session(base)
        resp = requests.post(
            f"{base}/v1/sessions/{sid}/requests", json={"nope": 1}, timeout=10
        )
        assert resp.status_code == 400

    def test_canonical_json_bodies(self, server):
        base, _ = server
        raw = requests.get(f"{base}/v1/healthz", timeout=10).content
        assert raw == b'{"status":"ok"}\n'

    def test_sse_stream_delivers_completion_and_notifications(self, server):
        base, _ = server
        sid = create_session(base)

        resp = requests.get(
            f"{base}/v1/events", params={"session": sid}, stream=True, timeout=10
        )
        assert resp.status_code == 200
        submit(base, sid, "Notify me of the status of net-1 every 10 minutes.")
        requests.post(f"{base}/v1/clock/advance", json={"seconds": 600}, timeout=10)

        seen = set()
        events = []
        for line in resp.iter_lines(decode_unicode=True):
            if line.startswith("event: "):
                current = line.removeprefix("event: ")
            elif line.startswith("data: "):
                events.append((current, json.loads(line.removeprefix("data: "))))
                seen.add(current)
            if {"completion", "notification", "fulfilment_transition"} <= seen:
                break
        resp.close()
        assert {"completion", "notification", "fulfilment_transition"} <= seen
        notification = next(p for k, p in events if k == "notification")
        assert notification["payload"]["subject_id"] == "net-1"

    def test_api_token_enforced_when_configured(self):
        config = GatewayConfig(
            listen_host="127.0.0.1", listen_port=0, random_seed=1, api_token="sekrit"
        )
        service = GatewayService(config)
        httpd = make_server(service)
        port = httpd.server_address[1]
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{port}"
        try:
            assert requests.get(f"{base}/v1/healthz", timeout=10).status_code == 200
            assert requests.get(f"{base}/v1/networks", timeout=10).status_code == 401
            ok = requests.get(
                f"{base}/v1/networks",
                headers={"Authorization": "Bearer sekrit"},
                timeout=10,
            )
            assert ok.status_code == 200
        finally:
            httpd.shutdown()
            httpd.server_close()
            service.close()
