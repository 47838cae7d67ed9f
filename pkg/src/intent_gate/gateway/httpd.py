"""HTTP facade over the gateway service, including the SSE event stream.

All request and response bodies are canonical JSON (one trailing newline),
which is what makes golden-file tests of full HTTP round-trips possible.
Errors use {"error": {"code", "message"}} with a matching status code.

Endpoints:
    POST /v1/sessions                      -> {"session_id"}
    POST /v1/sessions/{id}/requests        -> RequestOutcome
    GET  /v1/intents/{id}                  -> IntentRecord
    GET  /v1/intents/{id}/report           -> {"report", "text"}
    GET  /v1/networks                      -> inventory snapshot
    GET  /v1/events?session={id}           -> SSE stream
    GET  /v1/healthz                       -> {"status": "ok"}
    POST /v1/clock/advance                 -> {"now"} (simulation control)
    GET  /console/*                        -> static console files, if configured
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from intent_gate.canon import canonical_dumps
from intent_gate.execution import UnknownIntentId
from intent_gate.extraction.rules import EmptyRequest
from intent_gate.gateway.service import BackendUnavailable, GatewayService

_INTENT_PATH = re.compile(r"^/v1/intents/([^/]+)$")
_REPORT_PATH = re.compile(r"^/v1/intents/([^/]+)/report$")
_REQUESTS_PATH = re.compile(r"^/v1/sessions/([^/]+)/requests$")

_SSE_KEEPALIVE_SECONDS = 15.0

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class GatewayHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    service: GatewayService  # set by make_server

    # silence default stderr access log
    def log_message(self, fmt, *args):  # noqa: D102
        pass

    # ------------------------------------------------------------------
    # plumbing
    # ------------------------------------------------------------------

    def _send_json(self, obj, status: int = 200) -> None:
        body = (canonical_dumps(obj) + "\n").encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, err: ApiError) -> None:
        self._send_json(
            {"error": {"code": err.code, "message": err.message}}, status=err.status
        )

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, "bad_json", f"request body is not JSON: {exc}") from exc

    def _check_auth(self, path: str) -> None:
        token = self.service.config.api_token
        if not token or path == "/v1/healthz":
            return
        header = self.headers.get("Authorization", "")
        if header != f"Bearer {token}":
            raise ApiError(401, "unauthorized", "missing or invalid API token")

    # ------------------------------------------------------------------
    # dispatch
    # ------------------------------------------------------------------

    def do_GET(self) -> None:  # noqa: N802
        try:
            parsed = urlparse(self.path)
            self._check_auth(parsed.path)
            self._route_get(parsed)
        except ApiError as err:
            self._send_error_json(err)
        except BrokenPipeError:
            pass

    def do_POST(self) -> None:  # noqa: N802
        try:
            parsed = urlparse(self.path)
            self._check_auth(parsed.path)
            self._route_post(parsed)
        except ApiError as err:
            self._send_error_json(err)
        except BrokenPipeError:
            pass

    def _route_get(self, parsed) -> None:
        path = parsed.path
        if path == "/v1/healthz":
            self._send_json({"status": "ok"})
            return
        if path == "/v1/networks":
            self._send_json(self.service.inventory_snapshot())
            return
        match = _REPORT_PATH.match(path)
        if match:
            try:
                report = self.service.get_report(match.group(1))
            except UnknownIntentId:
                raise ApiError(404, "unknown_intent", f"no intent {match.group(1)}")
            self._send_json({"report": report.to_jsonable(), "text": report.to_text()})
            return
        match = _INTENT_PATH.match(path)
        if match:
            try:
                self._send_json(self.service.get_intent_record(match.group(1)))
            except UnknownIntentId:
                raise ApiError(404, "unknown_intent", f"no intent {match.group(1)}")
            return
        if path == "/v1/events":
            query = parse_qs(parsed.query)
            sessions = query.get("session")
            if not sessions:
                raise ApiError(400, "missing_session", "?session=<id> is required")
            self._stream_events(sessions[0])
            return
        if path == "/console" or path.startswith("/console/"):
            self._serve_console(path)
            return
        raise ApiError(404, "not_found", f"no route for GET {path}")

    def _route_post(self, parsed) -> None:
        path = parsed.path
        if path == "/v1/sessions":
            body = self._read_json()
            session_id = self.service.create_session(body.get("session_id"))
            self._send_json({"session_id": session_id}, status=201)
            return
        match = _REQUESTS_PATH.match(path)
        if match:
            body = self._read_json()
            text = body.get("text")
            if not isinstance(text, str):
                raise ApiError(400, "missing_text", 'body must be {"text": "..."}')
            try:
                outcome = self.service.handle_request(match.group(1), text)
            except EmptyRequest as exc:
                raise ApiError(400, "empty_request", str(exc))
            except BackendUnavailable as exc:
                raise ApiError(503, "backend_unavailable", str(exc))
            self._send_json(outcome.to_jsonable())
            return
        if path == "/v1/clock/advance":
            body = self._read_json()
            seconds = body.get("seconds")
            if not isinstance(seconds, int) or seconds < 0:
                raise ApiError(400, "bad_seconds", 'body must be {"seconds": <int >= 0>}')
            self._send_json({"now": self.service.advance_clock(seconds)})
            return
        raise ApiError(404, "not_found", f"no route for POST {path}")

    # ------------------------------------------------------------------
    # SSE
    # ------------------------------------------------------------------

    def _write_chunk(self, payload: bytes) -> None:
        # chunked transfer framing; clients unbuffer per chunk
        self.wfile.write(f"{len(payload):x}\r\n".encode("ascii"))
        self.wfile.write(payload)
        self.wfile.write(b"\r\n")
        self.wfile.flush()

    def _stream_events(self, session_id: str) -> None:
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream")
        self.send_header("Cache-Control", "no-cache")
        self.send_header("Transfer-Encoding", "chunked")
        self.end_headers()
        last_seq = int(self.headers.get("Last-Event-ID") or 0)
        try:
            while True:
                events = self.service.wait_for_events(
                    session_id, last_seq, timeout=_SSE_KEEPALIVE_SECONDS
                )
                if not events:
                    self._write_chunk(b": keepalive\n\n")
                    continue
                for event in events:
                    last_seq = event["seq"]
                    data = canonical_dumps(
                        {"ts": event["ts"], "payload": event["payload"]}
                    )
                    frame = f"id: {event['seq']}\nevent: {event['kind']}\ndata: {data}\n\n"
                    self._write_chunk(frame.encode("utf-8"))
        except (BrokenPipeError, ConnectionResetError):
            return

    # ------------------------------------------------------------------
    # console static files (secondary component)
    # ------------------------------------------------------------------

    def _serve_console(self, path: str) -> None:
        root = self.service.config.console_dir
        if not root:
            raise ApiError(404, "no_console", "console files are not configured")
        root_path = Path(root).resolve()
        relative = path.removeprefix("/console").lstrip("/") or "index.html"
        target = (root_path / relative).resolve()
        if not str(target).startswith(str(root_path)) or not target.is_file():
            raise ApiError(404, "not_found", f"no console file {relative}")
        body = target.read_bytes()
        self.send_response(200)
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(service: GatewayService) -> ThreadingHTTPServer:
    handler = type("BoundGatewayHandler", (GatewayHandler,), {"service": service})
    server = ThreadingHTTPServer(
        (service.config.listen_host, service.config.listen_port), handler
    )
    server.daemon_threads = True
    return server


def serve_forever(service: GatewayService) -> None:
    """Run the server; in live mode a ticker keeps logical time at wall time."""
    server = make_server(service)
    stop = threading.Event()

    if not service.deterministic:
        from intent_gate.clock import WallClock

        wall = WallClock()

        def ticker() -> None:
            while not stop.is_set():
                stop.wait(1.0)
                delta = int((wall.now() - service.clock.now()).total_seconds())
                if delta >= 1:
                    service.advance_clock(delta)

        threading.Thread(target=ticker, daemon=True, name="clock-ticker").start()

    try:
        server.serve_forever()
    finally:
        stop.set()
        server.server_close()
        service.close()
