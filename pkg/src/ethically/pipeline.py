"""End-to-end review orchestration: validate, gate, prompt, call, parse.

Shared by the HTTP service, the CLI and the evaluation harness so all three
surfaces exercise identical behavior. Nothing here persists or logs
submission content; log lines carry request metadata only.
"""

from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .gateway import (
    DEFAULT_MAX_OUTPUT_TOKENS,
    DEFAULT_MODEL_ID,
    Provider,
    ProviderRequest,
    RetryPolicy,
    with_retry,
)
from .guardrails import GuardrailReason, attach_disclaimers, check_submission
from .model import (
    EthicsReport,
    ProposalSubmission,
    ValidationFailure,
    report_to_dict,
    validate_submission,
)
from .parsing import ParseOutcome, ResponseKind, parse_report, validate_report
from .prompting import PromptConfig, assemble_prompt

logger = logging.getLogger(__name__)

CLINICAL_PRECHECK_NOTICE = (
    "The proposal matches clinical-research terminology; the reviewer may "
    "decline it as out of scope."
)


class SubmissionRejected(Exception):
    """Submission failed validation or a guardrail before any provider call."""

    def __init__(
        self,
        validation_failures: list[ValidationFailure],
        guardrail_reasons: tuple[GuardrailReason, ...] = (),
    ):
        messages = [f.code for f in validation_failures] + [
            r.value for r in guardrail_reasons
        ]
        super().__init__(", ".join(messages) or "submission rejected")
        self.validation_failures = validation_failures
        self.guardrail_reasons = guardrail_reasons


@dataclass(frozen=True)
class ReviewMeta:
    model_id: str
    latency_ms: int
    attempts: int
    prompt_version: str
    request_id: str

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "latency_ms": self.latency_ms,
            "attempts": self.attempts,
            "prompt_version": self.prompt_version,
            "request_id": self.request_id,
        }


@dataclass(frozen=True)
class ReviewOutcome:
    """One completed review: classification, parsed report, transport metadata."""

    kind: ResponseKind
    report: Optional[EthicsReport]
    raw_text: str
    warnings: tuple[str, ...]
    failures: tuple[str, ...]
    notices: tuple[str, ...]
    meta: ReviewMeta

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "report": report_to_dict(self.report) if self.report else None,
            "raw_text": self.raw_text,
            "warnings": list(self.warnings),
            "failures": list(self.failures),
            "notices": list(self.notices),
            "meta": self.meta.to_dict(),
        }


def run_review(
    submission: ProposalSubmission,
    provider: Provider,
    prompt_config: PromptConfig = PromptConfig(),
    retry_policy: RetryPolicy = RetryPolicy(),
    model_id: str = DEFAULT_MODEL_ID,
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS,
    precheck_enabled: bool = True,
    sleep: Callable[[float], None] = time.sleep,
) -> ReviewOutcome:
    """Run one full review against the given provider.

    Raises SubmissionRejected before any network traffic when validation or
    guardrails fail; BudgetExceeded when the prompt cannot fit the budget;
    ProviderError after retries are exhausted.
    """
    failures = validate_submission(submission)
    verdict = check_submission(submission, precheck_enabled=precheck_enabled)
    if failures or not verdict.allowed:
        raise SubmissionRejected(failures, verdict.reasons)

    prompt = assemble_prompt(prompt_config, submission)
    request = ProviderRequest(
        system_text=prompt.system_text,
        user_text=prompt.user_text,
        model_id=model_id,
        max_output_tokens=max_output_tokens,
    )
    result = with_retry(provider, request, retry_policy, sleep=sleep)
    result = dataclasses.replace(result, prompt_version=prompt.prompt_version)

    outcome: ParseOutcome = parse_report(result.raw_text)
    warnings = list(outcome.warnings)
    report = outcome.report
    if report is not None:
        report, disclaimer_warnings = attach_disclaimers(report)
        warnings.extend(disclaimer_warnings)
        warnings.extend(validate_report(report))

    notices = (
        (CLINICAL_PRECHECK_NOTICE,)
        if GuardrailReason.CLINICAL_PRECHECK_FLAG in verdict.advisories
        else ()
    )
    logger.info(
        "review %s: kind=%s attempts=%d latency_ms=%d prompt=%s",
        request.request_id,
        outcome.kind.value,
        result.attempts,
        result.latency_ms,
        result.prompt_version,
    )
    return ReviewOutcome(
        kind=outcome.kind,
        report=report,
        raw_text=result.raw_text,
        warnings=tuple(warnings),
        failures=outcome.failures,
        notices=notices,
        meta=ReviewMeta(
            model_id=result.model_id,
            latency_ms=result.latency_ms,
            attempts=result.attempts,
            prompt_version=result.prompt_version,
            request_id=request.request_id,
        ),
    )
