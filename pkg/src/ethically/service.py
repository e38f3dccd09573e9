"""Stateless HTTP JSON API over the review pipeline.

POST /review runs one full review; GET /health reports configuration without
touching the provider. Refusals are domain outcomes and return 200 so the UI
can render the model's polite decline. Nothing is persisted: two identical
requests leave the service's durable state identical to zero requests.
"""

from __future__ import annotations

import logging
import os
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .gateway import (
    API_KEY_ENV,
    BASE_URL_ENV,
    DEFAULT_BASE_URL,
    DEFAULT_MAX_OUTPUT_TOKENS,
    DEFAULT_MODEL_ID,
    DEFAULT_TIMEOUT_S,
    MODEL_ENV,
    HttpProvider,
    Provider,
    ProviderError,
    RetryPolicy,
)
from .model import DEFAULT_MAX_PROPOSAL_CHARS, ProposalSubmission, ValidationFailure
from .parsing import ResponseKind
from .pipeline import SubmissionRejected, run_review
from .prompting import BudgetExceeded, PromptConfig, prompt_version

logger = logging.getLogger(__name__)

BIND_ENV = "ETHICALLY_BIND"
DEFAULT_BIND = "127.0.0.1:8000"

# Mirrors the form-side notice shown when the provider is unreachable.
BUSY_HINT = "Claude's servers may be busy - please try again in a few minutes."


@dataclass(frozen=True)
class ServiceConfig:
    """Immutable service configuration; the API key never serializes or logs."""

    api_key: str = field(default="", repr=False)
    model_id: str = DEFAULT_MODEL_ID
    base_url: str = DEFAULT_BASE_URL
    bind_address: str = DEFAULT_BIND
    prompt_config: PromptConfig = PromptConfig()
    retry_policy: RetryPolicy = RetryPolicy()
    precheck_enabled: bool = True
    cors_allowed_origins: tuple[str, ...] = (
        "http://localhost:5173",
        "http://127.0.0.1:5173",
    )
    max_proposal_chars: int = DEFAULT_MAX_PROPOSAL_CHARS
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    timeout_s: float = DEFAULT_TIMEOUT_S
    # Flood control; requests per minute per client address, with burst.
    rate_limit_per_minute: float = 120.0
    rate_limit_burst: int = 30

    @property
    def max_body_bytes(self) -> int:
        # Proposal maximum (scaled for UTF-8/JSON escaping) plus envelope.
        return self.max_proposal_chars * 4 + 16 * 1024

    @classmethod
    def from_env(cls, environ=os.environ) -> "ServiceConfig":
        return cls(
            api_key=environ.get(API_KEY_ENV, ""),
            model_id=environ.get(MODEL_ENV, DEFAULT_MODEL_ID),
            base_url=environ.get(BASE_URL_ENV, DEFAULT_BASE_URL),
            bind_address=environ.get(BIND_ENV, DEFAULT_BIND),
        )


class _TokenBucket:
    """In-memory per-client token bucket; nothing is ever persisted."""

    def __init__(self, rate_per_minute: float, burst: int):
        self._rate = rate_per_minute / 60.0
        self._burst = float(burst)
        self._levels: dict[str, tuple[float, float]] = {}
        self._lock = threading.Lock()

    def allow(self, key: str, now: float | None = None) -> bool:
        now = time.monotonic() if now is None else now
        with self._lock:
            level, stamp = self._levels.get(key, (self._burst, now))
            level = min(self._burst, level + (now - stamp) * self._rate)
            if level < 1.0:
                self._levels[key] = (level, now)
                return False
            self._levels[key] = (level - 1.0, now)
            return True


def _failure_dicts(failures: list[ValidationFailure]) -> list[dict]:
    return [{"code": f.code, "field": f.field, "message": f.message} for f in failures]


def _decode_submission(
    payload: dict,
) -> tuple[ProposalSubmission | None, list[ValidationFailure]]:
    failures: list[ValidationFailure] = []

    def read_str(name: str) -> str:
        value = payload.get(name, "")
        if not isinstance(value, str):
            failures.append(
                ValidationFailure("InvalidType", name, f"{name} must be a string")
            )
            return ""
        return value

    field_of_research = read_str("field_of_research")
    country_region = read_str("country_region")
    proposal_text = read_str("proposal_text")
    supplementary = payload.get("supplementary_materials")
    if supplementary is not None and not isinstance(supplementary, str):
        failures.append(
            ValidationFailure(
                "InvalidType",
                "supplementary_materials",
                "supplementary_materials must be a string or null",
            )
        )
        supplementary = None
    pii_confirmed = payload.get("pii_confirmed", False)
    if not isinstance(pii_confirmed, bool):
        failures.append(
            ValidationFailure("InvalidType", "pii_confirmed", "pii_confirmed must be a boolean")
        )
        pii_confirmed = False
    if failures:
        return None, failures
    return (
        ProposalSubmission(
            field_of_research=field_of_research,
            country_region=country_region,
            proposal_text=proposal_text,
            supplementary_materials=supplementary or None,
            pii_confirmed=pii_confirmed,
        ),
        [],
    )


def create_app(config: ServiceConfig, provider: Provider | None = None) -> FastAPI:
    """Build the service; a provider can be injected for offline runs."""
    if provider is None:
        provider = HttpProvider(
            api_key=config.api_key, base_url=config.base_url, timeout_s=config.timeout_s
        )
    app = FastAPI(title="ethically", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_allowed_origins),
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    bucket = (
        _TokenBucket(config.rate_limit_per_minute, config.rate_limit_burst)
        if config.rate_limit_per_minute > 0
        else None
    )

    @app.middleware("http")
    async def limits(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and length.isdigit() and int(length) > config.max_body_bytes:
            return JSONResponse(
                {"error": "request_too_large", "max_bytes": config.max_body_bytes},
                status_code=413,
            )
        if bucket is not None and request.url.path == "/review":
            client = request.client.host if request.client else "unknown"
            if not bucket.allow(client):
                return JSONResponse(
                    {"error": "rate_limited", "hint": "slow down and retry shortly"},
                    status_code=429,
                )
        return await call_next(request)

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "prompt_version": prompt_version(config.prompt_config),
            "model_id": config.model_id,
        }

    @app.post("/review")
    async def review(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return JSONResponse(
                {"error": "invalid_json", "detail": "request body must be a JSON object"},
                status_code=400,
            )
        if not isinstance(payload, dict):
            return JSONResponse(
                {"error": "invalid_json", "detail": "request body must be a JSON object"},
                status_code=400,
            )
        submission, decode_failures = _decode_submission(payload)
        if submission is None:
            return JSONResponse(
                {"error": "submission_rejected", "failures": _failure_dicts(decode_failures),
                 "reasons": []},
                status_code=400,
            )
        try:
            outcome = await run_in_threadpool(
                run_review,
                submission,
                provider,
                prompt_config=config.prompt_config,
                retry_policy=config.retry_policy,
                model_id=config.model_id,
                max_output_tokens=config.max_output_tokens,
                precheck_enabled=config.precheck_enabled,
            )
        except SubmissionRejected as exc:
            return JSONResponse(
                {
                    "error": "submission_rejected",
                    "failures": _failure_dicts(exc.validation_failures),
                    "reasons": [r.value for r in exc.guardrail_reasons],
                },
                status_code=400,
            )
        except BudgetExceeded as exc:
            return JSONResponse(
                {"error": "budget_exceeded", "detail": str(exc)}, status_code=400
            )
        except ProviderError as exc:
            return JSONResponse(
                {
                    "error": {
                        "kind": exc.kind.value,
                        "retryable": exc.retryable,
                        "detail": exc.detail,
                    },
                    "attempts": exc.attempts,
                    "hint": BUSY_HINT if exc.retryable else None,
                },
                status_code=502,
            )
        status = 422 if outcome.kind is ResponseKind.MALFORMED else 200
        return JSONResponse(outcome.to_dict(), status_code=status)

    return app
