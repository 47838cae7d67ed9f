"""Deterministic rule-based extraction backend.

Scores each intent category from weighted keyword/phrase hits against a
versioned lexicon; every category at or above the threshold is emitted
with an explanation naming the matched cues and evidence spans at the
match sites. Texts that trip no category fall through to the sentinel
outcomes: a recognizable action outside the core-network vocabulary is
an unknown intent, anything interrogative or conversational carries no
intent.

The lexicon pattern dialect is deliberately narrow so the file ports
across implementations: case-insensitive literal phrases, ``|``
alternation, and word-boundary anchoring. No other regex constructs are
honoured.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from intent_gate.extraction.entities import extract_entities
from intent_gate.model import (
    DetectedIntent,
    EntityKind,
    ExtractionOutcome,
    IntentType,
    parse_intent_type,
)


class EmptyRequest(ValueError):
    """Raised when a request is blank after trimming."""


_SHARED_TAG = "shared"

#: Weight granted to the notification category when the text names an
#: explicit recurring frequency ("every 10 minutes"); the lexicon dialect
#: cannot express numeric patterns, so this cue comes from the entity
#: grammar instead.
_FREQUENCY_CUE_WEIGHT = 1.0
_FREQUENCY_CUE_LABEL = "recurring frequency"

# Verbs that signal a clear action the core-network vocabulary does not
# cover; consulted only after no category fired.
_ACTION_VERBS = frozenset(
    {
        "restart", "reboot", "order", "book", "buy", "purchase", "play",
        "turn", "switch", "print", "install", "uninstall", "email", "send",
        "call", "phone", "text", "open", "close", "shut", "cancel", "pause",
        "resume", "stop", "start", "delete", "erase", "format", "download",
        "upload", "translate", "write", "draw", "schedule", "clean", "fix",
        "repair", "upgrade", "replace", "move", "ship", "drive",
    }
)

_POLITE_PREFIXES = (
    "please", "kindly", "now", "then", "also", "and", "just",
    "urgent", "hi", "hello", "hey",
)
_MODALS = ("could", "can", "would", "will")

_INTERROGATIVE_LEADS = frozenset(
    {
        "what", "who", "whom", "whose", "which", "when", "where", "why",
        "how", "is", "are", "am", "was", "were", "do", "does", "did",
        "can", "could", "will", "would", "should", "shall", "may", "might",
        "have", "has",
    }
)


def _compile_pattern(pattern: str) -> re.Pattern[str]:
    alternatives = [re.escape(alt.strip()) for alt in pattern.split("|") if alt.strip()]
    if not alternatives:
        raise ValueError(f"lexicon pattern is empty: {pattern!r}")
    return re.compile(r"\b(?:" + "|".join(alternatives) + r")\b", re.IGNORECASE)


@dataclass(frozen=True)
class LexiconPattern:
    intent_type: IntentType
    pattern: str
    weight: float
    shared: bool
    regex: re.Pattern[str]


class Lexicon:
    """A versioned pattern table driving the rule-based backend."""

    def __init__(
        self, patterns: list[LexiconPattern], threshold: float = 1.0, version: str = "1"
    ) -> None:
        self.patterns = patterns
        self.threshold = threshold
        self.version = version

    @classmethod
    def from_jsonable(cls, raw: dict) -> "Lexicon":
        patterns = [
            LexiconPattern(
                intent_type=parse_intent_type(row["intent_type"]),
                pattern=row["pattern"],
                weight=float(row["weight"]),
                shared=_SHARED_TAG in row.get("tags", []),
                regex=_compile_pattern(row["pattern"]),
            )
            for row in raw["patterns"]
        ]
        return cls(
            patterns=patterns,
            threshold=float(raw.get("threshold", 1.0)),
            version=str(raw.get("version", "1")),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        return cls.from_jsonable(json.loads(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def bundled(cls) -> "Lexicon":
        raw = resources.files("intent_gate.data").joinpath("lexicon.json").read_text("utf-8")
        return cls.from_jsonable(json.loads(raw))


@dataclass
class _CategoryScore:
    score: float = 0.0
    cue_names: list[str] = field(default_factory=list)
    spans: list[tuple[int, int]] = field(default_factory=list)
    dedicated: bool = False


def _merge_spans(spans: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    merged: list[tuple[int, int]] = []
    for start, end in sorted(spans):
        if merged and start < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return tuple(merged)


def _sentences(text: str) -> list[str]:
    return [s for s in re.split(r"[.!?\n]+", text) if s.strip()]


def _names_known_action(text: str) -> bool:
    for sentence in _sentences(text):
        words = re.findall(r"[a-z']+", sentence.lower())
        while words and words[0] in _POLITE_PREFIXES:
            words = words[1:]
        if len(words) >= 2 and words[0] in _MODALS and words[1] == "you":
            words = words[2:]
        if words and words[0] in _ACTION_VERBS:
            return True
        for first, second in zip(words, words[1:]):
            if first == "to" and second in _ACTION_VERBS:
                return True
    return False


def _is_interrogative_or_conversational(text: str) -> bool:
    if "?" in text:
        return True
    words = re.findall(r"[a-z']+", text.lower())
    if words and words[0] in _INTERROGATIVE_LEADS:
        return True
    return True  # declarative small talk with no action verb


class RuleBasedExtractor:
    """Lexicon-driven classifier; pure function of its input text."""

    name = "rule-based"
    deterministic = True

    def __init__(self, lexicon: Lexicon | None = None) -> None:
        self._lexicon = lexicon or Lexicon.bundled()

    @property
    def lexicon(self) -> Lexicon:
        return self._lexicon

    def classify(self, request_text: str) -> ExtractionOutcome:
        if not request_text.strip():
            raise EmptyRequest("request text is blank")

        scores: dict[IntentType, _CategoryScore] = {t: _CategoryScore() for t in IntentType}
        for pattern in self._lexicon.patterns:
            matches = list(pattern.regex.finditer(request_text))
            if not matches:
                continue
            entry = scores[pattern.intent_type]
            entry.score += pattern.weight
            entry.cue_names.append(matches[0].group(0).lower())
            entry.spans.extend(m.span() for m in matches)
            if not pattern.shared:
                entry.dedicated = True

        frequency_spans = [
            e.raw_span for e in extract_entities(request_text) if e.kind is EntityKind.FREQUENCY
        ]
        if frequency_spans:
            entry = scores[IntentType.REGULAR_NOTIFICATION_REQUEST]
            entry.score += _FREQUENCY_CUE_WEIGHT
            entry.cue_names.append(_FREQUENCY_CUE_LABEL)
            entry.spans.extend(frequency_spans)
            entry.dedicated = True

        fired = {
            t: entry for t, entry in scores.items() if entry.score >= self._lexicon.threshold
        }
        self._arbitrate_report_vs_notification(fired)

        if fired:
            detected = [
                DetectedIntent(
                    intent_type=t,
                    explanation=self._explain(t, entry),
                    evidence_spans=_merge_spans(entry.spans),
                    confidence=min(1.0, entry.score / 2.0),
                )
                for t, entry in fired.items()
            ]
            return ExtractionOutcome.from_intents(detected)

        if _names_known_action(request_text):
            return ExtractionOutcome.unknown()
        assert _is_interrogative_or_conversational(request_text)
        return ExtractionOutcome.no_intent()

    @staticmethod
    def _arbitrate_report_vs_notification(fired: dict[IntentType, _CategoryScore]) -> None:
        """Settle the report-vs-notification ambiguity.

        When both categories fire, a category whose evidence is only the
        shared status/update phrasing yields to one backed by its own
        cues: a recurrence cue keeps the notification, a retrospective
        cue keeps the report, and both cues keep both.
        """
        report = fired.get(IntentType.INTENT_REPORT_REQUEST)
        notification = fired.get(IntentType.REGULAR_NOTIFICATION_REQUEST)
        if report is None or notification is None:
            return
        if notification.dedicated and not report.dedicated:
            del fired[IntentType.INTENT_REPORT_REQUEST]
        elif report.dedicated and not notification.dedicated:
            del fired[IntentType.REGULAR_NOTIFICATION_REQUEST]

    @staticmethod
    def _explain(intent_type: IntentType, entry: _CategoryScore) -> str:
        seen: list[str] = []
        for name in entry.cue_names:
            if name not in seen:
                seen.append(name)
        cues = ", ".join(f'"{name}"' for name in seen)
        return (
            f"Matched {intent_type.canonical_name} cues: {cues} "
            f"(score {entry.score:g})."
        )
