"""Labeled corpus: seed examples and deterministic augmentation.

The seed set instantiates one or two concrete requests per intent
category plus compound, no-intent, and unknown-intent cases. Augmentation
grows it with three label-preserving transforms: synonym paraphrasing,
random token erasure, and tone shifting. Cue phrases for an example's own
labels are computed from the lexicon and never touched, which is what
makes label preservation hold by construction rather than by luck.

Everything is deterministic per (example, seed): generating a corpus
twice with the same seed produces byte-identical files.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

from intent_gate.canon import canonical_line
from intent_gate.extraction.entities import extract_entities
from intent_gate.extraction.rules import _ACTION_VERBS, Lexicon
from intent_gate.model import EntityKind, IntentType, parse_intent_type

CORPUS_FORMAT = "intent-gate-corpus"

MARKER_NONE = "none"
MARKER_UNKNOWN = "unknown"

TECHNIQUES = ("paraphrase", "erasure", "tone_shift")


@dataclass(frozen=True)
class LabeledExample:
    """One corpus row: text plus its gold label set or sentinel marker."""

    id: str
    text: str
    labels: frozenset[IntentType]
    marker: str | None = None
    provenance: str = "seed"

    def __post_init__(self) -> None:
        if bool(self.labels) == (self.marker is not None):
            raise ValueError("marker present exactly when labels are empty")
        if self.marker is not None and self.marker not in (MARKER_NONE, MARKER_UNKNOWN):
            raise ValueError(f"unknown marker: {self.marker!r}")

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "text": self.text,
            "labels": sorted(t.canonical_name for t in self.labels),
            "marker": self.marker,
            "provenance": self.provenance,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "LabeledExample":
        return cls(
            id=data["id"],
            text=data["text"],
            labels=frozenset(parse_intent_type(name) for name in data["labels"]),
            marker=data.get("marker"),
            provenance=data.get("provenance", "seed"),
        )


def _ex(num: int, text: str, labels: Iterable[str] = (), marker: str | None = None):
    return LabeledExample(
        id=f"seed-{num:03d}",
        text=text,
        labels=frozenset(parse_intent_type(name) for name in labels),
        marker=marker,
    )


def seed_corpus() -> list[LabeledExample]:
    """The committed seed set: 12 single, 5 compound, 4 none, 4 unknown."""
    return [
        _ex(1, "Deploy a new network in RegionA with the following specifications: "
               "capacity of 20 units and PLMN 310-410.", ["deployment"]),
        _ex(2, "Please set up a new network in RegionB to cover the industrial park, "
               "with a capacity of 5 units.", ["deployment"]),
        _ex(3, "Modify the existing network net-1 to address the performance issues "
               "caused by high loading.", ["modification"]),
        _ex(4, "Reconfigure net-3 with PLMN 302-720 and increase the capacity to 12 "
               "units.", ["modification"]),
        _ex(5, "Ensure that the deployed network net-2 can support a QoS level 5 "
               "application with the following requirements: 5000 registered users.",
            ["performance assurance"]),
        _ex(6, "The network net-1 must support 3000 registered users and 1500 PDU "
               "sessions at all times.", ["performance assurance"]),
        _ex(7, "Please summarize the results of the previous request.", ["report"]),
        _ex(8, "Give me a report with details about the previous deployment request.",
            ["report"]),
        _ex(9, "Before proceeding, ensure that capacity exists in RegionC to perform "
               "the required changes.", ["feasibility"]),
        _ex(10, "Check whether sufficient capacity is available in RegionA for 4 more "
                "units before we proceed.", ["feasibility"]),
        _ex(11, "Notify me of the status of net-7 every 10 minutes.", ["notification"]),
        _ex(12, "Subscribe me to regular updates on the fulfillment status of net-2, "
                "sent every hour.", ["notification"]),
        _ex(13, "Modify net-1 to resolve the high load problems, make sure it can "
                "support 5000 registered users, and notify me of its status every 30 "
                "minutes.",
            ["modification", "performance assurance", "notification"]),
        _ex(14, "Deploy a new network in RegionB and ensure it can support 3000 "
                "registered users.", ["deployment", "performance assurance"]),
        _ex(15, "Before proceeding, check that sufficient capacity exists in RegionA; "
                "if it does, deploy a new network there with a capacity of 2 units.",
            ["feasibility", "deployment"]),
        _ex(16, "Reconfigure net-2 to expand the capacity to 8 units, then summarize "
                "the results of the previous request.", ["modification", "report"]),
        _ex(17, "Ensure net-3 can sustain 10000 registered users, and subscribe me to "
                "notifications on its fulfillment status every day.",
            ["performance assurance", "notification"]),
        _ex(18, "What is the weather like today?", marker=MARKER_NONE),
        _ex(19, "Hello! How are you doing this morning?", marker=MARKER_NONE),
        _ex(20, "Do you think 6G will arrive before 2030?", marker=MARKER_NONE),
        _ex(21, "That was very helpful, thank you.", marker=MARKER_NONE),
        _ex(22, "Restart my home router.", marker=MARKER_UNKNOWN),
        _ex(23, "Order a pizza for the night shift.", marker=MARKER_UNKNOWN),
        _ex(24, "Book a meeting room for tomorrow morning.", marker=MARKER_UNKNOWN),
        _ex(25, "Turn off the lights in the lab.", marker=MARKER_UNKNOWN),
    ]


class AugmentBank:
    """Shipped synonym/template banks; versioned data, not code."""

    def __init__(self, raw: Mapping[str, Any]) -> None:
        self.version: str = str(raw["version"])
        self.erasure_probability: float = float(raw["erasure_probability"])
        self.substitution_probability: float = float(raw["substitution_probability"])
        self.synonyms: dict[str, list[str]] = {
            k.lower(): list(v) for k, v in raw["synonyms"].items()
        }
        self.tone_templates: dict[str, str] = dict(raw["tone_templates"])

    @classmethod
    def bundled(cls) -> "AugmentBank":
        raw = resources.files("intent_gate.data").joinpath("augment_bank.json").read_text("utf-8")
        return cls(json.loads(raw))


def _protected_spans(example: LabeledExample, lexicon: Lexicon) -> list[tuple[int, int]]:
    """Character spans carrying the example's label cues.

    For labeled examples these are the match sites of the labels' own
    lexicon patterns (plus frequency mentions for notification labels);
    for unknown-marker examples, the action verb. Erasure and
    paraphrasing never touch these.
    """
    spans: list[tuple[int, int]] = []
    for pattern in lexicon.patterns:
        if pattern.intent_type in example.labels:
            spans.extend(m.span() for m in pattern.regex.finditer(example.text))
    if IntentType.REGULAR_NOTIFICATION_REQUEST in example.labels:
        spans.extend(
            e.raw_span
            for e in extract_entities(example.text)
            if e.kind is EntityKind.FREQUENCY
        )
    if example.marker == MARKER_UNKNOWN:
        verb_re = re.compile(
            r"\b(?:" + "|".join(sorted(_ACTION_VERBS)) + r")\b", re.IGNORECASE
        )
        spans.extend(m.span() for m in verb_re.finditer(example.text))
    return spans


def _overlaps(span: tuple[int, int], protected: list[tuple[int, int]]) -> bool:
    return any(span[0] < end and start < span[1] for start, end in protected)


def _paraphrase(example: LabeledExample, rng: random.Random, bank: AugmentBank,
                protected: list[tuple[int, int]]) -> str:
    text = example.text
    changed = False
    for phrase in sorted(bank.synonyms):
        match = re.search(r"(?<!\w)" + re.escape(phrase) + r"(?!\w)", text, re.IGNORECASE)
        if match is None or _overlaps(match.span(), protected):
            continue
        if rng.random() < bank.substitution_probability:
            replacement = rng.choice(bank.synonyms[phrase])
            if match.group(0)[0].isupper():
                replacement = replacement[0].upper() + replacement[1:]
            text = text[: match.start()] + replacement + text[match.end() :]
            changed = True
            # Spans shifted; recompute nothing: one substitution per call
            # keeps offsets honest.
            break
    if not changed:
        text = text + " Thanks."
    return text


def _erase(example: LabeledExample, rng: random.Random, bank: AugmentBank,
           protected: list[tuple[int, int]]) -> str:
    kept: list[str] = []
    offset = 0
    for token in example.text.split(" "):
        span = (offset, offset + len(token))
        offset += len(token) + 1
        if _overlaps(span, protected) or rng.random() >= bank.erasure_probability:
            kept.append(token)
    if not kept:
        kept = [example.text.split(" ")[0]]
    return " ".join(kept)


def _tone_shift(example: LabeledExample, rng: random.Random, bank: AugmentBank) -> str:
    tone = rng.choice(sorted(bank.tone_templates))
    return bank.tone_templates[tone].format(text=example.text)


def augment(
    example: LabeledExample,
    seed: int,
    techniques: Iterable[str] = TECHNIQUES,
    bank: AugmentBank | None = None,
    lexicon: Lexicon | None = None,
) -> list[LabeledExample]:
    """One variant per requested technique, labels copied unchanged.

    Deterministic per (example, seed): the RNG is keyed on the example
    id, the seed, and the technique name.
    """
    bank = bank or AugmentBank.bundled()
    lexicon = lexicon or Lexicon.bundled()
    unknown = set(techniques) - set(TECHNIQUES)
    if unknown:
        raise ValueError(f"unknown augmentation techniques: {sorted(unknown)}")
    protected = _protected_spans(example, lexicon)

    out: list[LabeledExample] = []
    for technique in TECHNIQUES:
        if technique not in techniques:
            continue
        rng = random.Random(f"{example.id}|{seed}|{technique}")
        if technique == "paraphrase":
            text = _paraphrase(example, rng, bank, protected)
        elif technique == "erasure":
            text = _erase(example, rng, bank, protected)
        else:
            text = _tone_shift(example, rng, bank)
        out.append(
            LabeledExample(
                id=f"{example.id}-{technique[:3]}{seed}",
                text=text,
                labels=example.labels,
                marker=example.marker,
                provenance=technique,
            )
        )
    return out


def build_corpus(
    seed: int, techniques: Iterable[str] = TECHNIQUES
) -> tuple[dict[str, Any], list[LabeledExample]]:
    """Seeds plus augmented variants, with the file header describing them."""
    bank = AugmentBank.bundled()
    lexicon = Lexicon.bundled()
    examples: list[LabeledExample] = []
    for example in seed_corpus():
        examples.append(example)
        examples.extend(augment(example, seed, techniques, bank=bank, lexicon=lexicon))
    header = {
        "format": CORPUS_FORMAT,
        "version": bank.version,
        "seed": seed,
        "techniques": sorted(techniques),
        "erasure_probability": bank.erasure_probability,
        "count": len(examples),
    }
    return header, examples


def write_corpus(path: str | Path, header: Mapping[str, Any],
                 examples: Iterable[LabeledExample]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(canonical_line(dict(header)))
        for example in examples:
            handle.write(canonical_line(example.to_jsonable()))


def read_corpus(path: str | Path) -> tuple[dict[str, Any], list[LabeledExample]]:
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        header = json.loads(handle.readline())
        if header.get("format") != CORPUS_FORMAT:
            raise ValueError(f"not a corpus file: {path}")
        examples = [
            LabeledExample.from_jsonable(json.loads(line))
            for line in handle
            if line.strip()
        ]
    return header, examples
