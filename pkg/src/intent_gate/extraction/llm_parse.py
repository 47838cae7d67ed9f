"""Parsing of free-text model responses into extraction outcomes.

The expected-behaviour prompt instructs the model to either emit one of
the sentinel phrases or to name every intent present with a
justification. The parser honours that contract: sentinel phrases take
absolute precedence, then every category name mentioned in an affirmative
context is collected with the nearest sentence as its explanation.
"""

from __future__ import annotations

import re

from intent_gate.model import DetectedIntent, ExtractionOutcome, IntentType


class UnparseableResponse(ValueError):
    """Raised when a response is empty or names no intents and no sentinel."""


_NO_INTENT_SENTINEL = "no intent present"
_UNKNOWN_SENTINEL = "unknown intent"

# Name forms a response plausibly uses per category. Bare nouns like
# "deployment" are deliberately absent: explanations routinely mention
# them while talking about something else ("the status of a network
# deployment"), so only the intent-denoting forms count as mentions.
_MENTION_PATTERNS: dict[IntentType, re.Pattern[str]] = {
    IntentType.DEPLOYMENT: re.compile(r"\bdeployment intent\b", re.IGNORECASE),
    IntentType.MODIFICATION: re.compile(r"\bmodification intent\b", re.IGNORECASE),
    IntentType.PERFORMANCE_ASSURANCE: re.compile(
        r"\bperformance assurance(?: intent)?\b", re.IGNORECASE
    ),
    IntentType.INTENT_REPORT_REQUEST: re.compile(
        r"\bintent report request\b|\breport request\b|\bintent report\b", re.IGNORECASE
    ),
    IntentType.INTENT_FEASIBILITY_CHECK: re.compile(
        r"\bintent feasibility check\b|\bfeasibility check\b", re.IGNORECASE
    ),
    IntentType.REGULAR_NOTIFICATION_REQUEST: re.compile(
        r"\bregular notification request\b|\bnotification request\b|\bregular notification\b",
        re.IGNORECASE,
    ),
}

_NEGATORS = re.compile(
    r"\b(?:not|no|isn'?t|is not|doesn'?t|does not|cannot|can'?t|rather than|"
    r"instead of|absence of|none of|neither|without|would not|wouldn'?t)\b",
    re.IGNORECASE,
)

_HEDGES = re.compile(r"\b(?:might|could)\b", re.IGNORECASE)

_NEGATION_WINDOW = 50


def _sentences_with_spans(raw: str) -> list[tuple[int, int, str]]:
    out = []
    for m in re.finditer(r"[^.!?\n]+[.!?]?", raw):
        if m.group(0).strip():
            out.append((m.start(), m.end(), m.group(0).strip()))
    return out


def parse_llm_response(raw: str) -> ExtractionOutcome:
    """Turn a raw model reply into an ExtractionOutcome.

    Pure and deterministic; duplicate mentions of a category collapse to
    one detection. Raises UnparseableResponse when the reply is empty or
    contains neither sentinel nor any category name.
    """
    if not raw or not raw.strip():
        raise UnparseableResponse("response is empty")

    lowered = raw.lower()
    if _NO_INTENT_SENTINEL in lowered:
        return ExtractionOutcome.no_intent()
    if _UNKNOWN_SENTINEL in lowered:
        return ExtractionOutcome.unknown()

    confidence = 0.5 if _HEDGES.search(raw) else 1.0
    sentences = _sentences_with_spans(raw)
    detected: dict[IntentType, DetectedIntent] = {}

    for intent_type, pattern in _MENTION_PATTERNS.items():
        for match in pattern.finditer(raw):
            if _is_negated(raw, match.start()):
                continue
            explanation = _explanation_for(sentences, match.start(), match.end())
            detected[intent_type] = DetectedIntent(
                intent_type=intent_type,
                explanation=explanation,
                evidence_spans=(),
                confidence=confidence,
            )
            break

    if not detected:
        raise UnparseableResponse("response names no intents and no sentinel")
    return ExtractionOutcome.from_intents(detected.values())


def _is_negated(raw: str, mention_start: int) -> bool:
    window_start = max(0, mention_start - _NEGATION_WINDOW)
    window = raw[window_start:mention_start]
    # Negation scope does not cross sentence ends.
    for breaker in ".!?\n":
        idx = window.rfind(breaker)
        if idx != -1:
            window = window[idx + 1 :]
    return bool(_NEGATORS.search(window))


def _explanation_for(
    sentences: list[tuple[int, int, str]], mention_start: int, mention_end: int
) -> str:
    for i, (start, end, sentence) in enumerate(sentences):
        if start <= mention_start < end:
            mention_len = mention_end - mention_start
            rest = len(sentence) - mention_len
            # A bare heading like "1. Modification Intent" explains
            # nothing; pull in the sentence that follows it.
            if rest < 15 and i + 1 < len(sentences):
                return f"{sentence} {sentences[i + 1][2]}"
            return sentence
    return sentences[-1][2] if sentences else "mentioned in response"
