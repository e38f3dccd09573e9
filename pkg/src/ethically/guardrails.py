"""Scope and privacy guardrails: PII gate, clinical precheck, log redaction.

The clinical precheck only flags - the authoritative decline lives in the
model prompt, so denying locally would change system behavior. Redaction
guarantees no proposal substring of 25 characters or more ever reaches a log
line; a content-hash prefix keeps duplicate submissions correlatable without
storing content.
"""

from __future__ import annotations

import dataclasses
import hashlib
import re
from dataclasses import dataclass
from enum import Enum

from .model import (
    CANONICAL_DISCLAIMER,
    EthicsReport,
    ProposalSubmission,
    validate_submission,
)

# Longest proposal substring allowed to survive in any log line.
REDACTION_THRESHOLD = 24
_WINDOW = REDACTION_THRESHOLD + 1


class GuardrailReason(str, Enum):
    PII_NOT_CONFIRMED = "PiiNotConfirmed"
    EMPTY_SUBMISSION = "EmptySubmission"
    CLINICAL_PRECHECK_FLAG = "ClinicalPrecheckFlag"


@dataclass(frozen=True)
class GuardrailVerdict:
    """Outcome of the submission gate.

    reasons carry denials (allowed=True implies reasons is empty);
    advisories carry non-blocking notices surfaced to the UI.
    """

    allowed: bool
    reasons: tuple[GuardrailReason, ...] = ()
    advisories: tuple[GuardrailReason, ...] = ()

    def __post_init__(self) -> None:
        if self.allowed and self.reasons:
            raise ValueError("an allowed verdict cannot carry denial reasons")


# Terms indicating a proposal is likely clinical research; matched on word
# boundaries so prose like "endorse" never trips the short entries.
CLINICAL_LEXICON: tuple[str, ...] = (
    "randomized controlled trial",
    "randomised controlled trial",
    "clinical trial",
    "placebo",
    "double-blind",
    "dose",
    "dosage",
    "drug administration",
    "medical intervention",
    "investigational product",
    "phase i trial",
    "phase ii trial",
    "phase iii trial",
)

_CLINICAL_PATTERNS = tuple(
    re.compile(rf"\b{re.escape(term)}\b", re.IGNORECASE) for term in CLINICAL_LEXICON
)


def clinical_terms_in(text: str) -> list[str]:
    """Lexicon terms present in the text, in lexicon order."""
    return [
        term
        for term, pattern in zip(CLINICAL_LEXICON, _CLINICAL_PATTERNS)
        if pattern.search(text)
    ]


def check_submission(
    s: ProposalSubmission, precheck_enabled: bool = True
) -> GuardrailVerdict:
    """Gate a submission before any provider call. Pure and deterministic.

    Denies when the PII-removal confirmation is missing or the submission is
    substantively empty; the clinical precheck attaches an advisory flag but
    never denies (the model owns the decline).
    """
    reasons: list[GuardrailReason] = []
    if not s.pii_confirmed:
        reasons.append(GuardrailReason.PII_NOT_CONFIRMED)
    if any(f.code == "EmptyField" for f in validate_submission(s)):
        reasons.append(GuardrailReason.EMPTY_SUBMISSION)
    advisories: list[GuardrailReason] = []
    if precheck_enabled and clinical_terms_in(s.proposal_text):
        advisories.append(GuardrailReason.CLINICAL_PRECHECK_FLAG)
    return GuardrailVerdict(
        allowed=not reasons, reasons=tuple(reasons), advisories=tuple(advisories)
    )


def attach_disclaimers(r: EthicsReport) -> tuple[EthicsReport, list[str]]:
    """Guarantee the report opens with the AI-limitations disclaimer.

    Returns the (possibly unchanged) report plus any warnings recorded.
    Idempotent: attaching twice equals attaching once.
    """
    if r.has_disclaimer_phrase():
        return r, []
    disclaimer = (
        f"{CANONICAL_DISCLAIMER}\n\n{r.disclaimer}" if r.disclaimer else CANONICAL_DISCLAIMER
    )
    patched = dataclasses.replace(r, disclaimer=disclaimer)
    return patched, ["model omitted the limitations disclaimer; canonical text prepended"]


def _redaction_tag(secret: str) -> str:
    return hashlib.sha256(secret.encode("utf-8")).hexdigest()[:8]


def _redact_secret(event: str, secret: str) -> str:
    if len(secret) < _WINDOW or len(event) < _WINDOW:
        return event
    windows = {secret[i : i + _WINDOW] for i in range(len(secret) - _WINDOW + 1)}
    marked = [False] * len(event)
    for i in range(len(event) - _WINDOW + 1):
        if event[i : i + _WINDOW] in windows:
            for j in range(i, i + _WINDOW):
                marked[j] = True
    if not any(marked):
        return event
    tag = f"[REDACTED:{_redaction_tag(secret)}]"
    out: list[str] = []
    i = 0
    while i < len(event):
        if marked[i]:
            out.append(tag)
            while i < len(event) and marked[i]:
                i += 1
        else:
            out.append(event[i])
            i += 1
    return "".join(out)


def redact_for_logs(event: str, s: ProposalSubmission) -> str:
    """Strip proposal content from a log event.

    No substring of the proposal text (or supplementary materials) longer
    than 24 characters survives; request ids and other metadata pass through
    untouched.
    """
    redacted = _redact_secret(event, s.proposal_text)
    if s.supplementary_materials:
        redacted = _redact_secret(redacted, s.supplementary_materials)
    return redacted
