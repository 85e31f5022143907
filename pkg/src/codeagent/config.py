"""Application configuration: one JSON document, overridable by flags.

The config file path comes from ``--config`` or the CODEAGENT_CONFIG
environment variable; every field has a usable default so the CLI works
with no file at all.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .agents.backends import BackendConfig
from .ingest.apiclient import ApiClientConfig
from .pipeline.plan import DEFAULT_MAX_ROUNDS
from .qachecker.scoring import QAConfig, default_config

CONFIG_ENV = "CODEAGENT_CONFIG"


@dataclass(frozen=True)
class AppConfig:
    backend: BackendConfig
    qa: QAConfig
    max_rounds: int = DEFAULT_MAX_ROUNDS
    api: ApiClientConfig | None = None
    paths: Mapping[str, str] = field(default_factory=dict)


def _backend_from_dict(data: Mapping[str, Any]) -> BackendConfig:
    known = {
        "kind", "endpoint", "model_id", "temperature", "max_output_tokens",
        "script", "cassette_path", "record", "max_retries", "retry_base_delay",
    }
    kwargs = {k: v for k, v in data.items() if k in known}
    if "script" in kwargs and kwargs["script"] is not None:
        kwargs["script"] = tuple(kwargs["script"])
    return BackendConfig(**kwargs)


def _api_from_dict(data: Mapping[str, Any]) -> ApiClientConfig:
    known = {
        "kind", "base_url", "token_env", "fixture_dir", "record",
        "max_retries", "retry_base_delay", "timeout",
    }
    return ApiClientConfig(**{k: v for k, v in data.items() if k in known})


def load_app_config(path: str | Path | None = None) -> AppConfig:
    """Load the config file, falling back to env var and then defaults."""
    if path is None:
        env_path = os.environ.get(CONFIG_ENV)
        path = Path(env_path) if env_path else None
    data: dict[str, Any] = {}
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))

    backend_data = data.get("backend")
    backend = (
        _backend_from_dict(backend_data)
        if backend_data
        else BackendConfig(kind="scripted", script=())
    )
    qa = QAConfig.from_dict(data["qa"]) if "qa" in data else default_config()
    api = _api_from_dict(data["api"]) if "api" in data else None
    plan = data.get("plan", {})
    return AppConfig(
        backend=backend,
        qa=qa,
        max_rounds=plan.get("max_rounds", DEFAULT_MAX_ROUNDS),
        api=api,
        paths=data.get("paths", {}),
    )
