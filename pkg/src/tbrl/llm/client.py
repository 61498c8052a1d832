"""Chat-completion client with record/replay cassettes.

Live mode performs HTTPS calls against an OpenAI-compatible endpoint
(configured via ``TBRL_LLM_ENDPOINT`` / ``TBRL_LLM_API_KEY``); replay
mode consumes a recorded cassette and is fully deterministic.  Request
hashes cover the message payload only, so sampling-parameter tweaks do
not invalidate cassettes.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from .usage import TokenUsage

__all__ = [
    "Cassette",
    "CassetteExhausted",
    "CassetteMismatch",
    "CassetteRecorder",
    "ChatClient",
    "CompletionExchange",
    "CompletionRequest",
    "HttpTransport",
    "ServiceError",
    "TransportResult",
    "request_hash",
]

logger = logging.getLogger(__name__)

ENDPOINT_VAR = "TBRL_LLM_ENDPOINT"
API_KEY_VAR = "TBRL_LLM_API_KEY"


class ServiceError(Exception):
    """Completion service failed after exhausting retries."""


class CassetteMismatch(Exception):
    """Replayed request does not match the recorded one."""


class CassetteExhausted(Exception):
    """More requests issued than the cassette holds."""


@dataclass(frozen=True)
class CompletionRequest:
    messages: tuple[tuple[str, str], ...]  # (role, content) pairs
    model: str = "default"
    temperature: float | None = None

    @classmethod
    def user(cls, content: str, model: str = "default") -> "CompletionRequest":
        return cls(messages=(("user", content),), model=model)


def request_hash(request: CompletionRequest) -> str:
    payload = json.dumps([list(m) for m in request.messages], ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TransportResult:
    text: str
    usage: TokenUsage
    latency_ms: int = 0


Transport = Callable[[CompletionRequest], TransportResult]


@dataclass(frozen=True)
class CompletionExchange:
    request: CompletionRequest
    response_text: str
    usage: TokenUsage
    latency_ms: int
    seq: int
    purpose: str = ""
    level: str = ""
    retries: int = 0

    def to_record(self) -> dict:
        return {
            "seq": self.seq,
            "request_hash": request_hash(self.request),
            "request": {
                "model": self.request.model,
                "messages": [list(m) for m in self.request.messages],
            },
            "response": self.response_text,
            "usage": {
                "prompt_tokens": self.usage.prompt_tokens,
                "completion_tokens": self.usage.completion_tokens,
            },
            "latency_ms": self.latency_ms,
        }


class HttpTransport:
    """One OpenAI-style chat-completion call per request."""

    def __init__(self, endpoint: str | None = None, api_key: str | None = None, timeout: float = 60.0):
        self.endpoint = endpoint or os.environ.get(ENDPOINT_VAR, "")
        self.api_key = api_key or os.environ.get(API_KEY_VAR, "")
        self.timeout = timeout
        if not self.endpoint:
            raise ServiceError(f"no endpoint configured; set {ENDPOINT_VAR}")

    def __call__(self, request: CompletionRequest) -> TransportResult:
        import requests

        payload = {
            "model": request.model,
            "messages": [{"role": r, "content": c} for r, c in request.messages],
        }
        if request.temperature is not None:
            payload["temperature"] = request.temperature
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        started = time.monotonic()
        resp = requests.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout)
        latency_ms = int((time.monotonic() - started) * 1000)
        if resp.status_code >= 500:
            raise ConnectionError(f"service returned {resp.status_code}")
        if resp.status_code != 200:
            raise ServiceError(f"service returned {resp.status_code}: {resp.text[:500]}")
        body = resp.json()
        usage = body.get("usage", {})
        return TransportResult(
            text=body["choices"][0]["message"]["content"],
            usage=TokenUsage(
                int(usage.get("prompt_tokens", 0)), int(usage.get("completion_tokens", 0))
            ),
            latency_ms=latency_ms,
        )


# ---------------------------------------------------------------------------
# Cassettes


@dataclass
class Cassette:
    """Recorded exchange sequence; append-only JSON-lines file on disk."""

    records: list[dict] = field(default_factory=list)
    trailer: dict | None = None

    @classmethod
    def load(cls, path: str | Path) -> "Cassette":
        records: list[dict] = []
        trailer = None
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            if "total" in row:
                trailer = row
            else:
                records.append(row)
        return cls(records=records, trailer=trailer)

    def total_usage(self) -> TokenUsage:
        out = TokenUsage()
        for row in self.records:
            out += TokenUsage(row["usage"]["prompt_tokens"], row["usage"]["completion_tokens"])
        return out

    def check_trailer(self) -> bool:
        if self.trailer is None:
            return True
        total = self.total_usage()
        return (
            self.trailer["total"]["prompt_tokens"] == total.prompt_tokens
            and self.trailer["total"]["completion_tokens"] == total.completion_tokens
            and self.trailer.get("exchanges", len(self.records)) == len(self.records)
        )


class CassetteRecorder:
    """Append exchanges to a cassette file, with a totals trailer on close."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text("", encoding="utf-8")
        self._total = TokenUsage()
        self._count = 0

    def append(self, exchange: CompletionExchange) -> None:
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(exchange.to_record(), ensure_ascii=False) + "\n")
        self._total += exchange.usage
        self._count += 1

    def close(self) -> None:
        trailer = {
            "total": {
                "prompt_tokens": self._total.prompt_tokens,
                "completion_tokens": self._total.completion_tokens,
            },
            "exchanges": self._count,
        }
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(trailer, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Client


class ChatClient:
    """Serializes exchanges for one run; live or replay."""

    def __init__(
        self,
        transport: Transport | None = None,
        cassette: Cassette | None = None,
        recorder: CassetteRecorder | None = None,
        max_retries: int = 2,
        backoff: float = 0.25,
    ):
        if cassette is None and transport is None:
            transport = HttpTransport()
        self.transport = transport
        self.cassette = cassette
        self.recorder = recorder
        self.max_retries = max_retries
        self.backoff = backoff
        self.log: list[CompletionExchange] = []
        self._cursor = 0
        self._seq = 0

    @property
    def replaying(self) -> bool:
        return self.cassette is not None

    def complete(
        self, request: CompletionRequest, purpose: str = "", level: str = ""
    ) -> CompletionExchange:
        if self.cassette is not None:
            exchange = self._replay(request)
        else:
            exchange = self._live(request)
        exchange = replace(exchange, purpose=purpose, level=level)
        self.log.append(exchange)
        if self.recorder is not None:
            self.recorder.append(exchange)
        return exchange

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def _replay(self, request: CompletionRequest) -> CompletionExchange:
        assert self.cassette is not None
        if self._cursor >= len(self.cassette.records):
            raise CassetteExhausted(f"cassette has only {len(self.cassette.records)} exchanges")
        row = self.cassette.records[self._cursor]
        incoming = request_hash(request)
        if row["request_hash"] != incoming:
            raise CassetteMismatch(
                f"exchange {self._cursor}: recorded {row['request_hash'][:12]}..., "
                f"got {incoming[:12]}..."
            )
        self._cursor += 1
        return CompletionExchange(
            request=request,
            response_text=row["response"],
            usage=TokenUsage(row["usage"]["prompt_tokens"], row["usage"]["completion_tokens"]),
            latency_ms=row.get("latency_ms", 0),
            seq=self._next_seq(),
        )

    def _live(self, request: CompletionRequest) -> CompletionExchange:
        assert self.transport is not None
        attempts = 0
        while True:
            try:
                result = self.transport(request)
                break
            except (ConnectionError, TimeoutError) as exc:
                attempts += 1
                logger.warning("completion attempt %d failed: %s", attempts, exc)
                if attempts > self.max_retries:
                    raise ServiceError(f"giving up after {attempts} attempts: {exc}") from exc
                time.sleep(self.backoff * (2 ** (attempts - 1)))
        return CompletionExchange(
            request=request,
            response_text=result.text,
            usage=result.usage,
            latency_ms=result.latency_ms,
            seq=self._next_seq(),
            retries=attempts,
        )
