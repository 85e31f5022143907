"""HTTP client for a Git-hosting REST API, with record/replay fixtures.

Live mode talks GitHub-shaped JSON over HTTP with retry/backoff and a
shared admission lock (one request in flight per client, so a single
rate-limit budget governs concurrent review sessions).  Replay mode
serves responses from fixture files keyed by a hash of the request, and
fails loudly on a miss.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import httpx

API_TOKEN_ENV = "CODEAGENT_API_TOKEN"

_RETRYABLE_STATUS = (500, 502, 503, 504)


class ApiError(Exception):
    pass


class NotFoundError(ApiError):
    def __init__(self, path: str):
        super().__init__(f"resource not found: {path}")
        self.path = path


class RateLimitedError(ApiError):
    def __init__(self, retry_after: float | None):
        hint = f"retry after {retry_after}s" if retry_after else "no retry hint"
        super().__init__(f"rate limited ({hint})")
        self.retry_after = retry_after


class SchemaError(ApiError):
    def __init__(self, field: str, context: str):
        super().__init__(f"response for {context} is missing field {field!r}")
        self.field = field


class FixtureMissError(ApiError):
    def __init__(self, request_hash: str, path: str):
        super().__init__(f"no recorded fixture {request_hash} for GET {path}")
        self.request_hash = request_hash


@dataclass(frozen=True)
class ApiClientConfig:
    kind: str = "replay"  # "live" | "replay"
    base_url: str = "https://api.github.com"
    token_env: str = API_TOKEN_ENV
    fixture_dir: str | None = None
    record: bool = False
    max_retries: int = 3
    retry_base_delay: float = 0.5
    timeout: float = 30.0

    def __post_init__(self) -> None:
        if self.kind not in ("live", "replay"):
            raise ValueError(f"kind must be live or replay, got {self.kind!r}")
        if self.kind == "replay" and not self.fixture_dir:
            raise ValueError("replay client needs a fixture_dir")


def request_hash(path: str, params: Mapping[str, Any] | None) -> str:
    canonical = json.dumps(["GET", path, sorted((params or {}).items())], sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:24]


def require(data: Mapping[str, Any], field: str, context: str) -> Any:
    if field not in data:
        raise SchemaError(field, context)
    return data[field]


class ApiClient:
    """GET-only JSON client; safe for concurrent use."""

    def __init__(self, config: ApiClientConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self._client: httpx.Client | None = None
        if config.kind == "live":
            self._client = httpx.Client(
                base_url=config.base_url, transport=transport, timeout=config.timeout
            )
        self._admission = threading.Lock()

    def close(self) -> None:
        if self._client is not None:
            self._client.close()

    def get_json(self, path: str, params: Mapping[str, Any] | None = None) -> Any:
        with self._admission:
            if self.config.kind == "replay":
                return self._replay(path, params)
            return self._live(path, params)

    # -- replay -------------------------------------------------------------

    def _fixture_path(self, key: str) -> Path:
        return Path(self.config.fixture_dir or "") / f"{key}.json"

    def _replay(self, path: str, params: Mapping[str, Any] | None) -> Any:
        key = request_hash(path, params)
        fixture = self._fixture_path(key)
        if not fixture.exists():
            raise FixtureMissError(key, path)
        recorded = json.loads(fixture.read_text(encoding="utf-8"))
        status = recorded.get("status", 200)
        headers = recorded.get("headers", {})
        body = recorded.get("body")
        self._raise_for_status(status, headers, path)
        return body

    # -- live ---------------------------------------------------------------

    def _live(self, path: str, params: Mapping[str, Any] | None) -> Any:
        assert self._client is not None
        headers = {"Accept": "application/vnd.github+json"}
        token = os.environ.get(self.config.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                delay = self.config.retry_base_delay * (2 ** (attempt - 1))
                time.sleep(delay * (1.0 + random.random() * 0.25))
            try:
                response = self._client.get(path, params=dict(params or {}), headers=headers)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in _RETRYABLE_STATUS:
                last_error = ApiError(f"HTTP {response.status_code} from {path}")
                continue
            self._raise_for_status(response.status_code, response.headers, path)
            body = response.json()
            if self.config.record and self.config.fixture_dir:
                self._record(path, params, response.status_code, response.headers, body)
            return body
        raise ApiError(f"giving up on GET {path} after retries: {last_error}")

    def _record(
        self,
        path: str,
        params: Mapping[str, Any] | None,
        status: int,
        headers: Mapping[str, str],
        body: Any,
    ) -> None:
        key = request_hash(path, params)
        fixture = self._fixture_path(key)
        fixture.parent.mkdir(parents=True, exist_ok=True)
        fixture.write_text(
            json.dumps(
                {
                    "request": {"method": "GET", "path": path,
                                "params": dict(params or {})},
                    "status": status,
                    "headers": {k: v for k, v in headers.items()
                                if k.lower() in ("retry-after", "x-ratelimit-remaining")},
                    "body": body,
                },
                indent=2,
                ensure_ascii=False,
                sort_keys=True,
            ),
            encoding="utf-8",
        )

    # -- shared status handling ----------------------------------------------

    @staticmethod
    def _raise_for_status(status: int, headers: Mapping[str, str], path: str) -> None:
        if status == 404:
            raise NotFoundError(path)
        if status in (403, 429):
            lowered = {k.lower(): v for k, v in headers.items()}
            retry_after = lowered.get("retry-after")
            remaining = lowered.get("x-ratelimit-remaining")
            if retry_after is not None or remaining == "0" or status == 429:
                raise RateLimitedError(float(retry_after) if retry_after else None)
            raise ApiError(f"HTTP 403 from {path}")
        if status >= 400:
            raise ApiError(f"HTTP {status} from {path}")


def write_fixture(
    fixture_dir: str | Path,
    path: str,
    params: Mapping[str, Any] | None,
    body: Any,
    status: int = 200,
    headers: Mapping[str, str] | None = None,
) -> Path:
    """Author a replay fixture by hand (used by tests and demo data)."""
    key = request_hash(path, params)
    target = Path(fixture_dir) / f"{key}.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(
        json.dumps(
            {
                "request": {"method": "GET", "path": path, "params": dict(params or {})},
                "status": status,
                "headers": dict(headers or {}),
                "body": body,
            },
            indent=2,
            ensure_ascii=False,
            sort_keys=True,
        ),
        encoding="utf-8",
    )
    return target
