"""Agent backends: the thing that turns a prompt history into a reply.

Three kinds share one interface:

* ``scripted`` — pops canned responses in order; the workhorse for
  deterministic pipeline tests.
* ``live``     — POSTs a chat-completions style JSON body to an HTTP
  endpoint, with bounded retries on transient failures; can record
  responses into a cassette.
* ``replay``   — answers from a recorded cassette, keyed by a hash of
  the request payload; byte-deterministic.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import httpx

from .roles import Message

API_KEY_ENV = "CODEAGENT_API_KEY"

BACKEND_KINDS = ("live", "scripted", "replay")

_RETRYABLE_STATUS = (429, 500, 502, 503, 504)


class BackendError(Exception):
    """Base class for backend failures the pipeline can catch."""


class ScriptExhaustedError(BackendError):
    def __init__(self, used: int):
        super().__init__(f"scripted backend exhausted after {used} responses")
        self.used = used


class CassetteMissError(BackendError):
    def __init__(self, request_hash: str):
        super().__init__(f"no recorded response for request hash {request_hash}")
        self.request_hash = request_hash


class LiveBackendError(BackendError):
    pass


@dataclass(frozen=True)
class BackendConfig:
    """Immutable description of one backend."""

    kind: str
    endpoint: str = ""
    model_id: str = ""
    temperature: float = 0.0
    max_output_tokens: int = 1024
    script: tuple[str, ...] | None = None
    cassette_path: str | None = None
    record: bool = False
    max_retries: int = 3
    retry_base_delay: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in BACKEND_KINDS:
            raise ValueError(f"kind must be one of {BACKEND_KINDS}, got {self.kind!r}")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must lie in [0, 2], got {self.temperature}")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")
        if self.kind == "live" and (not self.endpoint or not self.model_id):
            raise ValueError("live backend needs endpoint and model_id")
        if self.kind == "scripted" and self.script is None:
            raise ValueError("scripted backend needs a script")
        if self.kind == "replay" and not self.cassette_path:
            raise ValueError("replay backend needs a cassette_path")


def request_payload(config: BackendConfig, history: Sequence[Message], speaker: str) -> dict:
    """The wire payload; also the cassette key source."""
    return {
        "model": config.model_id,
        "messages": [
            {
                "role": "assistant" if m.speaker == speaker else "user",
                "content": m.content,
            }
            for m in history
        ],
        "temperature": config.temperature,
        "max_tokens": config.max_output_tokens,
    }


def payload_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ScriptedBackend:
    def __init__(self, config: BackendConfig):
        self.config = config
        self._responses = list(config.script or ())
        self._cursor = 0

    def complete(self, history: Sequence[Message], speaker: str = "assistant") -> Message:
        if self._cursor >= len(self._responses):
            raise ScriptExhaustedError(self._cursor)
        content = self._responses[self._cursor]
        self._cursor += 1
        return Message(speaker=speaker, content=content, turn_index=len(history))


class ReplayBackend:
    def __init__(self, config: BackendConfig):
        self.config = config
        self._cassette = _load_cassette(Path(config.cassette_path or ""))

    def complete(self, history: Sequence[Message], speaker: str = "assistant") -> Message:
        key = payload_hash(request_payload(self.config, history, speaker))
        if key not in self._cassette:
            raise CassetteMissError(key)
        return Message(speaker=speaker, content=self._cassette[key], turn_index=len(history))


class LiveBackend:
    """HTTP chat-completions client; safe for concurrent use."""

    def __init__(self, config: BackendConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self._client = httpx.Client(transport=transport, timeout=30.0)
        self._record_lock = threading.Lock()

    def complete(self, history: Sequence[Message], speaker: str = "assistant") -> Message:
        payload = request_payload(self.config, history, speaker)
        content = self._post_with_retries(payload)
        if self.config.record and self.config.cassette_path:
            with self._record_lock:
                path = Path(self.config.cassette_path)
                cassette = _load_cassette(path) if path.exists() else {}
                cassette[payload_hash(payload)] = content
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(
                    json.dumps(cassette, indent=2, sort_keys=True, ensure_ascii=False),
                    encoding="utf-8",
                )
        return Message(speaker=speaker, content=content, turn_index=len(history))

    def _post_with_retries(self, payload: dict) -> str:
        headers = {}
        api_key = os.environ.get(API_KEY_ENV)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                time.sleep(self.config.retry_base_delay * (2 ** (attempt - 1)))
            try:
                response = self._client.post(self.config.endpoint, json=payload, headers=headers)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in _RETRYABLE_STATUS:
                last_error = LiveBackendError(
                    f"endpoint returned HTTP {response.status_code}"
                )
                continue
            if response.status_code != 200:
                raise LiveBackendError(
                    f"endpoint returned HTTP {response.status_code}: {response.text[:200]}"
                )
            return _extract_content(response.json())
        raise LiveBackendError(
            f"giving up after {self.config.max_retries + 1} attempts: {last_error}"
        )

    def close(self) -> None:
        self._client.close()


def _extract_content(body: dict) -> str:
    try:
        return body["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise LiveBackendError(
            f"response body lacks choices[0].message.content: {json.dumps(body)[:200]}"
        ) from None


def _load_cassette(path: Path) -> dict[str, str]:
    if not path.exists():
        return {}
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"cassette {path} must hold a JSON object")
    return {str(k): str(v) for k, v in data.items()}


Backend = ScriptedBackend | ReplayBackend | LiveBackend


def create_backend(
    config: BackendConfig,
    transport: httpx.BaseTransport | None = None,
) -> Backend:
    if config.kind == "scripted":
        return ScriptedBackend(config)
    if config.kind == "replay":
        return ReplayBackend(config)
    return LiveBackend(config, transport=transport)


def complete(backend: Backend, history: Sequence[Message], speaker: str = "assistant") -> Message:
    """Produce the next assistant message for ``history``."""
    return backend.complete(history, speaker)
