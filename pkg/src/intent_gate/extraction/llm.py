"""LLM extraction backend: prompt + transport + response parsing."""

from __future__ import annotations

from typing import Protocol

from intent_gate.extraction.llm_parse import parse_llm_response
from intent_gate.extraction.prompt import PromptSpec, build_prompt, default_prompt_spec
from intent_gate.model import ExtractionOutcome


class ChatTransport(Protocol):
    deterministic: bool

    def send(self, system: str, user: str) -> str: ...


class LlmExtractor:
    """Classifies by one chat exchange per request.

    Deterministic exactly when the underlying transport is (replay
    fixtures yes, live endpoints no). Retry behaviour lives in the
    transport; parse failures propagate as UnparseableResponse.
    """

    name = "llm"

    def __init__(self, transport: ChatTransport, spec: PromptSpec | None = None) -> None:
        self._transport = transport
        self._spec = spec or default_prompt_spec()
        self._system = build_prompt(self._spec)
        self.deterministic = bool(getattr(transport, "deterministic", False))

    def classify(self, request_text: str) -> ExtractionOutcome:
        raw = self._transport.send(self._system, request_text)
        return parse_llm_response(raw)
