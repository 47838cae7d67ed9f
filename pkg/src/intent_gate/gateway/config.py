"""Gateway configuration: defaults, file values, environment overrides.

Precedence is defaults < config file (canonical JSON) < INTENT_GATE_*
environment variables, where each field's variable name is simply its
upper-cased field name (INTENT_GATE_BACKEND, INTENT_GATE_LISTEN_PORT,
and so on). The LLM credential is not part of the config object at all:
the transport reads INTENT_GATE_LLM_KEY directly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

ENV_PREFIX = "INTENT_GATE_"

BACKENDS = ("rule", "llm", "replay")


@dataclass
class GatewayConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8470
    backend: str = "rule"
    lexicon_path: str | None = None
    prompt_spec_path: str | None = None
    llm_endpoint: str | None = None
    llm_model: str = "gpt-3.5-turbo"
    llm_temperature: float = 0.0
    llm_retries: int = 2
    llm_fallback_to_rules: bool = False
    replay_dir: str | None = None
    inventory_path: str | None = None
    event_log_path: str | None = None
    session_ttl_seconds: int = 24 * 3600
    random_seed: int | None = None
    api_token: str | None = None
    console_dir: str | None = None

    def validate(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.backend == "llm":
            if not self.llm_endpoint:
                raise ValueError("backend 'llm' requires llm_endpoint")
            if not os.environ.get("INTENT_GATE_LLM_KEY"):
                raise ValueError(
                    "backend 'llm' requires the INTENT_GATE_LLM_KEY environment variable"
                )
        if self.backend == "replay" and not self.replay_dir:
            raise ValueError("backend 'replay' requires replay_dir")


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, raw: str, target_type: Any) -> Any:
    if raw == "" and "None" in str(target_type):
        return None
    if target_type in (int, "int") or "int" in str(target_type):
        return int(raw)
    if target_type in (float, "float") or "float" in str(target_type):
        return float(raw)
    if target_type in (bool, "bool") or "bool" in str(target_type):
        lowered = raw.lower()
        if lowered in _BOOL_TRUE:
            return True
        if lowered in _BOOL_FALSE:
            return False
        raise ValueError(f"{name}: cannot parse boolean from {raw!r}")
    return raw


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> GatewayConfig:
    """Build a validated config from file and environment."""
    env = os.environ if env is None else env
    values: dict[str, Any] = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(raw) - {f.name for f in fields(GatewayConfig)}
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        values.update(raw)

    for spec in fields(GatewayConfig):
        env_name = ENV_PREFIX + spec.name.upper()
        if env_name in env:
            values[spec.name] = _coerce(spec.name, env[env_name], spec.type)

    config = GatewayConfig(**values)
    config.validate()
    return config
