"""Request-interpretation front half: prompts, backends, entity extraction."""

from intent_gate.extraction.backends import ExtractorBackend
from intent_gate.extraction.entities import extract_entities
from intent_gate.extraction.llm_parse import UnparseableResponse, parse_llm_response
from intent_gate.extraction.prompt import PromptSpec, build_prompt, default_prompt_spec
from intent_gate.extraction.rules import EmptyRequest, Lexicon, RuleBasedExtractor

__all__ = [
    "EmptyRequest",
    "ExtractorBackend",
    "Lexicon",
    "PromptSpec",
    "RuleBasedExtractor",
    "UnparseableResponse",
    "build_prompt",
    "default_prompt_spec",
    "extract_entities",
    "parse_llm_response",
]
