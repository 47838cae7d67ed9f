"""Backend interface shared by the rule, LLM, and replay extraction paths."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from intent_gate.model import ExtractionOutcome


@runtime_checkable
class ExtractorBackend(Protocol):
    """Anything that can classify a request into an extraction outcome.

    Backends are stateless after construction and safe to call
    concurrently. A backend advertising deterministic=True must return
    identical outcomes for identical inputs.
    """

    name: str
    deterministic: bool

    def classify(self, request_text: str) -> ExtractionOutcome: ...
