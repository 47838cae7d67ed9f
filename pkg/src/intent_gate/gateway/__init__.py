"""Gateway: configuration, orchestration service, HTTP/SSE server, CLI."""

from intent_gate.gateway.config import GatewayConfig, load_config
from intent_gate.gateway.service import BackendUnavailable, GatewayService, RequestOutcome

__all__ = [
    "BackendUnavailable",
    "GatewayConfig",
    "GatewayService",
    "RequestOutcome",
    "load_config",
]
