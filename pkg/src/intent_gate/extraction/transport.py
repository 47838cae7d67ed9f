"""Chat transports: live HTTP, replay fixtures, and recording.

The wire shape is the ubiquitous chat-completions form: POST a JSON body
{model, temperature, messages} and read the first choice's message
content. Every exchange carries exactly one system message (the rendered
prompt) followed by exactly one user message (the request text).

Replay fixtures let the whole LLM path run deterministically offline:
a directory of JSON files {request_text, raw_response} keyed by a content
hash of the request text. The replay transport refuses on a cache miss
rather than guessing.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import requests

from intent_gate.canon import canonical_dumps

ENV_API_KEY = "INTENT_GATE_LLM_KEY"


class TransportError(RuntimeError):
    """Network, auth, or response-schema failure after retries."""


class ReplayMiss(TransportError):
    """No recorded fixture for this request text."""


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ("system", "user"):
            raise ValueError(f"unsupported role: {self.role!r}")


@dataclass(frozen=True)
class ChatExchange:
    """One request/response pair on the chat wire."""

    model: str
    temperature: float
    messages: tuple[ChatMessage, ...]
    response_content: str

    def __post_init__(self) -> None:
        roles = [m.role for m in self.messages]
        if roles != ["system", "user"]:
            raise ValueError(
                f"exchange must be one system message then one user message, got {roles}"
            )

    def request_jsonable(self) -> dict:
        return {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [{"role": m.role, "content": m.content} for m in self.messages],
        }


def fixture_key(request_text: str) -> str:
    """Stable fixture filename stem for a request text."""
    return hashlib.sha256(request_text.encode("utf-8")).hexdigest()[:16]


class HttpChatTransport:
    """Live transport against a chat-completions endpoint.

    Retries transient failures with exponential backoff, then surfaces a
    TransportError. The bearer credential comes from the INTENT_GATE_LLM_KEY
    environment variable unless given explicitly.
    """

    deterministic = False

    def __init__(
        self,
        endpoint: str,
        model: str,
        temperature: float = 0.0,
        retries: int = 2,
        timeout: float = 30.0,
        backoff: float = 0.5,
        api_key: str | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self._endpoint = endpoint
        self._model = model
        self._temperature = temperature
        self._retries = retries
        self._timeout = timeout
        self._backoff = backoff
        self._api_key = api_key if api_key is not None else os.environ.get(ENV_API_KEY)
        self._sleep = sleep
        self.last_exchange: ChatExchange | None = None

    def send(self, system: str, user: str) -> str:
        messages = (ChatMessage("system", system), ChatMessage("user", user))
        body = {
            "model": self._model,
            "temperature": self._temperature,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
        }
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"

        last_error: Exception | None = None
        for attempt in range(self._retries + 1):
            if attempt:
                self._sleep(self._backoff * (2 ** (attempt - 1)))
            try:
                resp = requests.post(
                    self._endpoint, json=body, headers=headers, timeout=self._timeout
                )
                if resp.status_code // 100 != 2:
                    raise TransportError(
                        f"HTTP {resp.status_code} from {self._endpoint}: {resp.text[:200]}"
                    )
                content = resp.json()["choices"][0]["message"]["content"]
                if not isinstance(content, str):
                    raise TransportError("response content is not text")
                self.last_exchange = ChatExchange(
                    model=self._model,
                    temperature=self._temperature,
                    messages=messages,
                    response_content=content,
                )
                return content
            except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
                last_error = exc
            except TransportError as exc:
                last_error = exc
        raise TransportError(
            f"chat endpoint failed after {self._retries + 1} attempts: {last_error}"
        )


class ReplayTransport:
    """Serves recorded responses from a fixture directory; errors on miss."""

    deterministic = True

    def __init__(self, fixtures_dir: str | Path) -> None:
        self._dir = Path(fixtures_dir)

    def send(self, system: str, user: str) -> str:
        path = self._dir / f"{fixture_key(user)}.json"
        if not path.exists():
            raise ReplayMiss(f"no replay fixture for request (expected {path.name})")
        data = json.loads(path.read_text(encoding="utf-8"))
        return data["raw_response"]


class RecordingTransport:
    """Wraps a live transport and captures fixtures as it goes."""

    deterministic = False

    def __init__(self, inner: HttpChatTransport, fixtures_dir: str | Path) -> None:
        self._inner = inner
        self._dir = Path(fixtures_dir)
        self._dir.mkdir(parents=True, exist_ok=True)

    def send(self, system: str, user: str) -> str:
        response = self._inner.send(system, user)
        path = self._dir / f"{fixture_key(user)}.json"
        path.write_text(
            canonical_dumps({"request_text": user, "raw_response": response}) + "\n",
            encoding="utf-8",
        )
        return response
