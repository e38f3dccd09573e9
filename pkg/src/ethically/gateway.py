"""Provider gateway: one network round-trip per attempt, retry with backoff.

The provider contract is a single method so alternate backends are drop-in;
a deterministic, internally synchronized mock ships alongside the HTTPS
implementation for desk-scale testing. Nothing in this module writes prompt
or response content to logs or storage - log lines carry metadata only.
"""

from __future__ import annotations

import dataclasses
import logging
import random
import threading
import time
import uuid
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Protocol, Sequence, Union

import httpx

logger = logging.getLogger(__name__)

# Per-attempt deadline: at least twice the typical 30-60 s report latency.
DEFAULT_TIMEOUT_S = 120.0
DEFAULT_MAX_OUTPUT_TOKENS = 4096

API_KEY_ENV = "ETHICALLY_API_KEY"
MODEL_ENV = "ETHICALLY_MODEL"
BASE_URL_ENV = "ETHICALLY_BASE_URL"

DEFAULT_MODEL_ID = "claude-sonnet-4-20250514"
DEFAULT_BASE_URL = "https://api.anthropic.com"


class ErrorKind(str, Enum):
    TIMEOUT = "Timeout"
    OVERLOADED = "Overloaded"
    AUTH_FAILURE = "AuthFailure"
    BAD_REQUEST = "BadRequest"
    TRANSPORT_FAILURE = "TransportFailure"


_RETRYABLE_KINDS = frozenset(
    {ErrorKind.TIMEOUT, ErrorKind.OVERLOADED, ErrorKind.TRANSPORT_FAILURE}
)


class ProviderError(Exception):
    """A failed provider call; retryable derives from the error kind."""

    def __init__(self, kind: ErrorKind, detail: str = "", attempts: int = 1):
        super().__init__(f"{kind.value}: {detail}" if detail else kind.value)
        self.kind = kind
        self.detail = detail
        self.attempts = attempts

    @property
    def retryable(self) -> bool:
        return self.kind in _RETRYABLE_KINDS

    def copy(self) -> "ProviderError":
        return ProviderError(self.kind, self.detail, self.attempts)


@dataclass(frozen=True)
class ProviderRequest:
    system_text: str
    user_text: str
    model_id: str
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    request_id: str = ""

    def __post_init__(self) -> None:
        if not self.system_text or not self.user_text:
            raise ValueError("system_text and user_text must be non-empty")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be >= 1")
        if not self.request_id:
            object.__setattr__(self, "request_id", new_request_id())


@dataclass(frozen=True)
class ProviderResult:
    raw_text: str
    model_id: str
    latency_ms: int
    attempts: int = 1
    prompt_version: str = ""


def new_request_id() -> str:
    return uuid.uuid4().hex


class Provider(Protocol):
    def complete(self, req: ProviderRequest) -> ProviderResult:
        """One round-trip; returns the raw model text or raises ProviderError."""
        ...


ScriptEntry = Union[str, ProviderError, ProviderResult]


class MockProvider:
    """Deterministic scripted provider for tests and offline runs.

    Serves scripted outcomes in order and repeats the last entry after
    exhaustion. Internally synchronized: concurrent callers observe the
    script order atomically, with no duplicated or skipped entries.
    """

    def __init__(self, script: Sequence[ScriptEntry], model_id: str = "mock-model"):
        if not script:
            raise ValueError("script must be non-empty")
        self._script = list(script)
        self._model_id = model_id
        self._lock = threading.Lock()
        self._cursor = 0
        self.calls = 0

    def complete(self, req: ProviderRequest) -> ProviderResult:
        with self._lock:
            entry = self._script[min(self._cursor, len(self._script) - 1)]
            self._cursor += 1
            self.calls += 1
        if isinstance(entry, ProviderError):
            raise entry.copy()
        if isinstance(entry, ProviderResult):
            return entry
        return ProviderResult(
            raw_text=entry, model_id=req.model_id or self._model_id, latency_ms=0
        )


class KeyedMockProvider:
    """Mock that picks its response by which key appears in the user message.

    Used by the evaluation harness to map corpus cases to scripted responses:
    the key is a snippet of the case's proposal text, which the assembled
    user message always embeds.
    """

    def __init__(
        self,
        responses: dict[str, ScriptEntry],
        default: Optional[ScriptEntry] = None,
    ):
        self._responses = dict(responses)
        self._default = default

    def complete(self, req: ProviderRequest) -> ProviderResult:
        entry = self._default
        for key, scripted in self._responses.items():
            if key in req.user_text:
                entry = scripted
                break
        if entry is None:
            raise ProviderError(
                ErrorKind.BAD_REQUEST, "no scripted response matches the request"
            )
        if isinstance(entry, ProviderError):
            raise entry.copy()
        if isinstance(entry, ProviderResult):
            return entry
        return ProviderResult(raw_text=entry, model_id=req.model_id, latency_ms=0)


class HttpProvider:
    """HTTPS gateway to the configured messages endpoint.

    Credentials come from the environment (ETHICALLY_API_KEY); request and
    response bodies follow the provider's published wire schema and stay
    behind this boundary.
    """

    def __init__(
        self,
        api_key: str,
        base_url: str = DEFAULT_BASE_URL,
        timeout_s: float = DEFAULT_TIMEOUT_S,
    ):
        if not api_key:
            raise ValueError("api_key must be configured")
        self._api_key = api_key
        self._base_url = base_url.rstrip("/")
        self._timeout_s = timeout_s

    def complete(self, req: ProviderRequest) -> ProviderResult:
        body = {
            "model": req.model_id,
            "max_tokens": req.max_output_tokens,
            "system": req.system_text,
            "messages": [{"role": "user", "content": req.user_text}],
        }
        headers = {
            "x-api-key": self._api_key,
            "anthropic-version": "2023-06-01",
            "content-type": "application/json",
        }
        started = time.monotonic()
        try:
            response = httpx.post(
                f"{self._base_url}/v1/messages",
                json=body,
                headers=headers,
                timeout=self._timeout_s,
            )
        except httpx.TimeoutException as exc:
            raise ProviderError(ErrorKind.TIMEOUT, f"deadline exceeded: {exc}") from exc
        except httpx.TransportError as exc:
            raise ProviderError(ErrorKind.TRANSPORT_FAILURE, str(exc)) from exc
        latency_ms = int((time.monotonic() - started) * 1000)

        if response.status_code in (429, 503):
            raise ProviderError(
                ErrorKind.OVERLOADED, f"provider returned HTTP {response.status_code}"
            )
        if response.status_code in (401, 403):
            raise ProviderError(
                ErrorKind.AUTH_FAILURE, f"provider returned HTTP {response.status_code}"
            )
        if 400 <= response.status_code < 500:
            raise ProviderError(
                ErrorKind.BAD_REQUEST, f"provider returned HTTP {response.status_code}"
            )
        if response.status_code >= 500:
            raise ProviderError(
                ErrorKind.TRANSPORT_FAILURE,
                f"provider returned HTTP {response.status_code}",
            )

        try:
            payload = response.json()
            text = "".join(
                block.get("text", "")
                for block in payload.get("content", [])
                if block.get("type") == "text"
            )
            model_id = payload.get("model", req.model_id)
        except ValueError as exc:
            raise ProviderError(
                ErrorKind.TRANSPORT_FAILURE, "provider returned unparseable JSON"
            ) from exc
        if not text:
            raise ProviderError(
                ErrorKind.TRANSPORT_FAILURE, "provider returned empty content"
            )
        logger.debug(
            "request %s completed: model=%s latency_ms=%d", req.request_id, model_id, latency_ms
        )
        return ProviderResult(raw_text=text, model_id=model_id, latency_ms=latency_ms)


@dataclass(frozen=True)
class RetryPolicy:
    """Bounded exponential backoff with jitter above the base delay."""

    max_attempts: int = 3
    base_delay: float = 2.0
    max_delay: float = 30.0

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.base_delay < 0 or self.max_delay < self.base_delay:
            raise ValueError("delays must satisfy 0 <= base_delay <= max_delay")


def backoff_delay(policy: RetryPolicy, attempt: int, rng: random.Random) -> float:
    """Delay before the retry after `attempt` failures (attempt >= 1).

    Uniform in [base_delay, min(max_delay, base_delay * 2**(attempt-1))], so
    every step stays within the configured bounds and the expected delay is
    non-decreasing.
    """
    cap = min(policy.max_delay, policy.base_delay * (2 ** (attempt - 1)))
    if cap <= policy.base_delay:
        return policy.base_delay
    return rng.uniform(policy.base_delay, cap)


def with_retry(
    provider: Provider,
    req: ProviderRequest,
    policy: RetryPolicy = RetryPolicy(),
    sleep: Callable[[float], None] = time.sleep,
    rng: Optional[random.Random] = None,
) -> ProviderResult:
    """Call the provider, retrying only retryable errors.

    With max_attempts=1 this behaves exactly like provider.complete(req).
    The returned result (or raised error) records the actual attempt count.
    """
    rng = rng if rng is not None else random.Random()
    for attempt in range(1, policy.max_attempts + 1):
        try:
            result = provider.complete(req)
            return dataclasses.replace(result, attempts=attempt)
        except ProviderError as exc:
            exc.attempts = attempt
            if not exc.retryable or attempt >= policy.max_attempts:
                logger.debug(
                    "request %s failed: kind=%s attempts=%d",
                    req.request_id,
                    exc.kind.value,
                    attempt,
                )
                raise
            sleep(backoff_delay(policy, attempt, rng))
    raise AssertionError("unreachable")  # pragma: no cover
