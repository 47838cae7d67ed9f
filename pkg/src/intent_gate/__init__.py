"""Intent gateway for a simulated 5G core network.

Interprets natural-language operator requests into the six core-network
intent categories, compiles them into JSON policy documents, and executes
them against an in-process core simulator with feasibility checks,
fulfillment tracking, reports, and scheduled notifications.
"""

__version__ = "0.1.0"

from intent_gate.model import (
    DetectedIntent,
    Entity,
    EntityKind,
    ExtractionOutcome,
    IntentType,
    StructuredIntent,
    parse_intent_type,
)

__all__ = [
    "DetectedIntent",
    "Entity",
    "EntityKind",
    "ExtractionOutcome",
    "IntentType",
    "StructuredIntent",
    "parse_intent_type",
    "__version__",
]
