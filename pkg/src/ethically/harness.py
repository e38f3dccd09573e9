"""Evaluation harness: run an annotated proposal corpus, score detection.

Each corpus case plants one target issue and lists lowercase marker terms;
a case counts as detected when the parsed report raises an issue at or above
the case's priority threshold whose title/problem/recommendations contain a
marker. Matching is scoped to issue blocks on purpose - a report that merely
mentions a term in its compliance checklist has not identified the issue.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from .gateway import KeyedMockProvider, ProviderError, ScriptEntry
from .model import (
    CANONICAL_DISCLAIMER,
    PRIORITY_RANK,
    ComplianceFinding,
    ComplianceStatus,
    EthicalIssue,
    EthicsReport,
    Framework,
    IssuePriority,
    ProposalSubmission,
    RiskScore,
)
from .parsing import ResponseKind, render_canonical
from .pipeline import ReviewOutcome

CORPUS_FIELDS = (
    "id",
    "discipline",
    "region",
    "proposal_text",
    "target_issue",
    "markers",
    "min_priority",
    "expected_refusal",
)

# Proposal-text prefix length used to key mock responses to cases.
_CASE_KEY_CHARS = 120


class CorpusFormatError(ValueError):
    """A corpus record is malformed; the message carries its location."""


class DuplicateCaseId(ValueError):
    """Two corpus records share an id."""


@dataclass(frozen=True)
class CorpusCase:
    id: str
    discipline: str
    region: str
    proposal_text: str
    target_issue: str
    markers: tuple[str, ...]
    min_priority: IssuePriority
    expected_refusal: bool = False

    def submission(self) -> ProposalSubmission:
        return ProposalSubmission(
            field_of_research=self.discipline,
            country_region=self.region,
            proposal_text=self.proposal_text,
            pii_confirmed=True,
        )

    def key(self) -> str:
        return self.proposal_text[:_CASE_KEY_CHARS]


@dataclass(frozen=True)
class CaseResult:
    id: str
    kind: Optional[ResponseKind]
    detected: bool
    matched_markers: tuple[str, ...] = ()
    risk_value: Optional[int] = None
    warnings: tuple[str, ...] = ()
    refusal_matched: bool = False
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value if self.kind else None,
            "detected": self.detected,
            "matched_markers": list(self.matched_markers),
            "risk_value": self.risk_value,
            "warnings": list(self.warnings),
            "refusal_matched": self.refusal_matched,
            "error": self.error,
        }


@dataclass(frozen=True)
class RunSummary:
    total: int
    detected: int
    refusal_matches: int
    detection_rate: Optional[float]
    refusals: int
    malformed: int
    errors: int
    risk_histogram: dict[int, int]


def _require(condition: bool, location: str, message: str) -> None:
    if not condition:
        raise CorpusFormatError(f"{location}: {message}")


def _parse_case(record: dict, location: str) -> CorpusCase:
    _require(isinstance(record, dict), location, "record must be a JSON object")
    missing = [f for f in CORPUS_FIELDS if f not in record]
    extra = [f for f in record if f not in CORPUS_FIELDS]
    _require(not missing, location, f"missing fields: {missing}")
    _require(not extra, location, f"unknown fields: {extra}")
    for name in ("id", "discipline", "region", "proposal_text", "target_issue"):
        value = record[name]
        _require(
            isinstance(value, str) and value.strip() != "",
            location,
            f"{name} must be a non-empty string",
        )
    markers = record["markers"]
    _require(
        isinstance(markers, list) and all(isinstance(m, str) for m in markers),
        location,
        "markers must be a list of strings",
    )
    _require(
        all(m == m.lower() and m.strip() for m in markers),
        location,
        "markers must be non-blank lowercase terms",
    )
    expected_refusal = record["expected_refusal"]
    _require(
        isinstance(expected_refusal, bool), location, "expected_refusal must be a boolean"
    )
    _require(
        bool(markers) or expected_refusal,
        location,
        "markers must be non-empty unless expected_refusal is true",
    )
    try:
        min_priority = IssuePriority(record["min_priority"])
    except ValueError:
        raise CorpusFormatError(
            f"{location}: min_priority must be one of High, Moderate, Minor"
        ) from None
    return CorpusCase(
        id=record["id"],
        discipline=record["discipline"],
        region=record["region"],
        proposal_text=record["proposal_text"],
        target_issue=record["target_issue"],
        markers=tuple(markers),
        min_priority=min_priority,
        expected_refusal=expected_refusal,
    )


def load_corpus(path: Union[str, Path]) -> list[CorpusCase]:
    """Load a JSONL corpus file (one case object per line).

    Rejects malformed records with their line number and duplicate ids.
    """
    path = Path(path)
    cases: list[CorpusCase] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            location = f"{path.name}:{line_no}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{location}: invalid JSON ({exc})") from None
            case = _parse_case(record, location)
            if case.id in seen:
                raise DuplicateCaseId(f"{location}: duplicate case id {case.id!r}")
            seen.add(case.id)
            cases.append(case)
    return cases


def bundled_corpus_path() -> Path:
    return Path(str(resources.files("ethically").joinpath("corpus", "cases.jsonl")))


def load_bundled_corpus() -> list[CorpusCase]:
    return load_corpus(bundled_corpus_path())


Pipeline = Callable[[ProposalSubmission], ReviewOutcome]


def run_case(case: CorpusCase, pipeline: Pipeline) -> CaseResult:
    """Run one case and score detection.

    detected is true only for parsed reports where an issue at or above the
    case's priority threshold contains a marker term; an expected refusal
    answered with a refusal scores as refusal_matched instead. Provider
    failures become case-level errors so the run continues.
    """
    try:
        outcome = pipeline(case.submission())
    except ProviderError as exc:
        return CaseResult(
            id=case.id,
            kind=None,
            detected=False,
            error=f"{exc.kind.value}: {exc.detail}",
        )
    matched: tuple[str, ...] = ()
    if outcome.report is not None:
        threshold = PRIORITY_RANK[case.min_priority]
        qualifying = [
            issue.search_text()
            for issue in outcome.report.issues
            if PRIORITY_RANK[issue.priority] >= threshold
        ]
        matched = tuple(
            m for m in case.markers if any(m in text for text in qualifying)
        )
    detected = outcome.kind is ResponseKind.REPORT and bool(matched)
    return CaseResult(
        id=case.id,
        kind=outcome.kind,
        detected=detected,
        matched_markers=matched,
        risk_value=outcome.report.risk.value if outcome.report else None,
        warnings=outcome.warnings,
        refusal_matched=case.expected_refusal and outcome.kind is ResponseKind.REFUSAL,
    )


def summarize(results: Sequence[CaseResult]) -> RunSummary:
    """Aggregate per-case results; pure recomputation, order-independent."""
    total = len(results)
    detected = sum(1 for r in results if r.detected)
    refusal_matches = sum(1 for r in results if r.refusal_matched)
    histogram = {value: 0 for value in range(1, 6)}
    for r in results:
        if r.kind is ResponseKind.REPORT and r.risk_value in histogram:
            histogram[r.risk_value] += 1
    rate = round((detected + refusal_matches) / total, 4) if total else None
    return RunSummary(
        total=total,
        detected=detected,
        refusal_matches=refusal_matches,
        detection_rate=rate,
        refusals=sum(1 for r in results if r.kind is ResponseKind.REFUSAL),
        malformed=sum(1 for r in results if r.kind is ResponseKind.MALFORMED),
        errors=sum(1 for r in results if r.error is not None),
        risk_histogram=histogram,
    )


def run_corpus(
    cases: Sequence[CorpusCase],
    pipeline: Pipeline,
    parallelism: int = 1,
) -> tuple[RunSummary, list[CaseResult]]:
    """Run every case, optionally in parallel; results are ordered by case id
    so output is deterministic regardless of parallelism."""
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    if parallelism == 1:
        results = [run_case(case, pipeline) for case in cases]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(lambda c: run_case(c, pipeline), cases))
    results.sort(key=lambda r: r.id)
    return summarize(results), results


def _rate_text(rate: Optional[float]) -> str:
    return "n/a" if rate is None else f"{rate:.4f}"


def emit_summary(s: RunSummary, format: str = "markdown") -> str:
    """Render a run summary with stable field ordering; rates use 4 decimals."""
    if format == "json":
        payload = {
            "total": s.total,
            "detected": s.detected,
            "refusal_matches": s.refusal_matches,
            "detection_rate": s.detection_rate,
            "refusals": s.refusals,
            "malformed": s.malformed,
            "errors": s.errors,
            "risk_histogram": {str(k): s.risk_histogram[k] for k in range(1, 6)},
        }
        return json.dumps(payload, indent=2) + "\n"
    if format == "csv":
        header = (
            "total,detected,refusal_matches,detection_rate,refusals,malformed,errors,"
            "risk_1,risk_2,risk_3,risk_4,risk_5"
        )
        row = (
            f"{s.total},{s.detected},{s.refusal_matches},{_rate_text(s.detection_rate)},"
            f"{s.refusals},{s.malformed},{s.errors},"
            + ",".join(str(s.risk_histogram[k]) for k in range(1, 6))
        )
        return f"{header}\n{row}\n"
    if format == "markdown":
        lines = [
            "| metric | value |",
            "| --- | --- |",
            f"| total | {s.total} |",
            f"| detected | {s.detected} |",
            f"| refusal_matches | {s.refusal_matches} |",
            f"| detection_rate | {_rate_text(s.detection_rate)} |",
            f"| refusals | {s.refusals} |",
            f"| malformed | {s.malformed} |",
            f"| errors | {s.errors} |",
            f"| risk_histogram | "
            + " ".join(f"{k}:{s.risk_histogram[k]}" for k in range(1, 6))
            + " |",
        ]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown summary format {format!r}")


def summary_from_json(text: str) -> RunSummary:
    """Inverse of emit_summary(..., 'json'); round-trip oracle."""
    payload = json.loads(text)
    return RunSummary(
        total=payload["total"],
        detected=payload["detected"],
        refusal_matches=payload["refusal_matches"],
        detection_rate=payload["detection_rate"],
        refusals=payload["refusals"],
        malformed=payload["malformed"],
        errors=payload["errors"],
        risk_histogram={int(k): v for k, v in payload["risk_histogram"].items()},
    )


_RISK_BY_PRIORITY = {
    IssuePriority.HIGH: 5,
    IssuePriority.MODERATE: 3,
    IssuePriority.MINOR: 2,
}


def synthesize_detection_response(case: CorpusCase) -> str:
    """Canonical report text that raises the case's target issue.

    The marker terms appear inside the issue block (and only there), at the
    case's own priority threshold, so detection scoring is exercised exactly
    as specified.
    """
    risk_value = _RISK_BY_PRIORITY[case.min_priority]
    report = EthicsReport(
        disclaimer=CANONICAL_DISCLAIMER,
        summary_assessment=(
            "The proposal is methodologically sound but raises an ethical "
            "concern that must be addressed before submission."
        ),
        compliance=(
            ComplianceFinding(
                framework=Framework.NUREMBERG_CODE,
                status=ComplianceStatus.CONCERN,
                detail="Voluntariness of participation requires closer attention",
            ),
            ComplianceFinding(
                framework=Framework.LEGAL_REGULATORY,
                status=ComplianceStatus.ADEQUATE,
                detail="Data protection arrangements appear appropriate",
            ),
        ),
        issues=(
            EthicalIssue(
                priority=case.min_priority,
                title=case.target_issue,
                problem=(
                    f"The proposal shows {case.target_issue}; key aspects: "
                    + ", ".join(case.markers)
                    + "."
                ),
                recommendations=(
                    "Revise the protocol to resolve this issue before submission",
                ),
            ),
        ),
        risk=RiskScore.from_value(
            risk_value,
            "The identified issue drives the score; the remaining design is sound.",
        ),
        supplementary_assessment=None,
    )
    return render_canonical(report)


_BLAND_ISSUE = EthicalIssue(
    priority=IssuePriority.MINOR,
    title="Archiving statement wording",
    problem="The information sheet omits the standard archiving statement.",
    recommendations=("Add the archiving statement to the information sheet",),
)


def synthesize_miss_response(case: CorpusCase) -> str:
    """Well-formed report that fails to raise the case's target issue."""
    issues = () if any(m in _BLAND_ISSUE.search_text() for m in case.markers) else (
        _BLAND_ISSUE,
    )
    report = EthicsReport(
        disclaimer=CANONICAL_DISCLAIMER,
        summary_assessment=(
            "The proposal appears benign and raises no substantial ethical "
            "objections in this review."
        ),
        compliance=(
            ComplianceFinding(
                framework=Framework.NUREMBERG_CODE,
                status=ComplianceStatus.ADEQUATE,
                detail="Participation arrangements appear appropriate",
            ),
        ),
        issues=issues,
        risk=RiskScore.from_value(2, "Only minor presentation points were noted."),
        supplementary_assessment=None,
    )
    return render_canonical(report)


def canonical_refusal_text() -> str:
    """Polite decline used by scripted mocks for out-of-scope proposals."""
    return (
        "Thank you for your submission. I must politely decline this review: "
        "the proposal describes clinical research, which falls outside the "
        "scope of this service. Please consult your institutional research "
        "ethics committee or the responsible medical ethics board."
    )


def mock_provider_for(
    cases: Sequence[CorpusCase], responses: dict[str, ScriptEntry]
) -> KeyedMockProvider:
    """Build a provider that answers each case with its scripted response.

    `responses` maps case ids to response text (or errors); the provider keys
    on each case's proposal-text prefix, which the assembled user message
    embeds verbatim.
    """
    unknown = set(responses) - {case.id for case in cases}
    if unknown:
        raise ValueError(f"responses reference unknown case ids: {sorted(unknown)}")
    keyed: dict[str, ScriptEntry] = {}
    for case in cases:
        if case.id in responses:
            keyed[case.key()] = responses[case.id]
    return KeyedMockProvider(keyed)
