"""System-prompt construction for the LLM extraction backend.

A prompt has four components rendered in a fixed order: the agent role,
the classification task, background context describing the intent
categories, and the expected response behaviour. The shipped defaults
live under ``intent_gate/data`` so operators can swap them per install
without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class PromptSpec:
    """The four prompt components, each mandatory."""

    role: str
    task_description: str
    background_context: str
    expected_behaviour: str

    def __post_init__(self) -> None:
        for name in ("role", "task_description", "background_context", "expected_behaviour"):
            if not getattr(self, name).strip():
                raise ValueError(f"prompt component {name!r} must be non-empty")


def build_prompt(spec: PromptSpec) -> str:
    """Render the system prompt: the four components joined by blank lines.

    Rendering is deterministic and stable across releases; replay fixtures
    depend on it.
    """
    return "\n\n".join(
        [spec.role, spec.task_description, spec.background_context, spec.expected_behaviour]
    )


def _data_text(name: str) -> str:
    return resources.files("intent_gate.data").joinpath(name).read_text(encoding="utf-8")


def default_prompt_spec() -> PromptSpec:
    """The bundled prompt: role/task/behaviour cells plus the context excerpt."""
    raw = json.loads(_data_text("prompt_spec.json"))
    context = raw.get("background_context") or _data_text(raw["background_context_file"])
    return PromptSpec(
        role=raw["role"],
        task_description=raw["task_description"],
        background_context=context,
        expected_behaviour=raw["expected_behaviour"],
    )


def load_prompt_spec(path: str | Path) -> PromptSpec:
    """Load a prompt spec from a JSON file.

    The file holds the four components inline; ``background_context_file``
    may point at a sibling text file instead of an inline value.
    """
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    context = raw.get("background_context")
    if not context:
        context = (path.parent / raw["background_context_file"]).read_text(encoding="utf-8")
    return PromptSpec(
        role=raw["role"],
        task_description=raw["task_description"],
        background_context=context,
        expected_behaviour=raw["expected_behaviour"],
    )
