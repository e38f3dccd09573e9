"""Acceptance suite: every release criterion, offline, at stated tolerance.

Each test prints one PASS line on success (run with `pytest -s` to see them);
a failing criterion fails its test. Everything here runs against the mock
provider - no network, no credentials.
"""

import dataclasses
import logging
import random

import pytest
from fastapi.testclient import TestClient

from ethically.gateway import ErrorKind, MockProvider, ProviderError, RetryPolicy, with_retry
from ethically.gateway import ProviderRequest
from ethically.harness import (
    emit_summary,
    load_bundled_corpus,
    mock_provider_for,
    run_corpus,
    synthesize_detection_response,
    synthesize_miss_response,
)
from ethically.model import (
    CONTEXTUAL_PRINCIPLES,
    ESSENTIAL_PRINCIPLES,
    RISK_RUBRIC,
    ComplianceStatus,
    Framework,
    IssuePriority,
)
from ethically.parsing import (
    ParseOutcome,
    ResponseKind,
    parse_report,
    render_canonical,
    validate_report,
)
from ethically.pipeline import run_review
from ethically.prompting import (
    PROFESSIONAL_LANGUAGE_INSTRUCTION,
    PromptConfig,
    build_system_prompt,
)
from ethically.service import ServiceConfig, create_app
from helpers import GOLDEN_REPORT_PATH, random_report


def _ok(line: str) -> None:
    print(f"ACCEPTANCE PASS: {line}")


def test_criterion_1_prompt_completeness():
    """Default system prompt carries every required element verbatim."""
    text = build_system_prompt(PromptConfig())
    assert "cannot replace human ethical oversight" in text
    for name in ESSENTIAL_PRINCIPLES + CONTEXTUAL_PRINCIPLES:
        assert name in text, f"missing principle: {name}"
    for header in (
        "Summary Assessment",
        "Compliance Analysis",
        "Potential Ethical Issues and Recommendations",
        "Ethics Risk Score",
        "Supplementary Materials Assessment",
    ):
        assert header in text, f"missing section header: {header}"
    for label in RISK_RUBRIC.values():
        assert label in text, f"missing rubric label: {label}"
    assert "politely decline" in text and "clinical" in text
    assert PROFESSIONAL_LANGUAGE_INSTRUCTION in text
    _ok("1 prompt completeness - disclaimer, 12 principles, 5 headers, 5 labels, instructions")


def test_criterion_2_golden_parse():
    """The transcribed example report parses to its exact expected shape."""
    outcome = parse_report(GOLDEN_REPORT_PATH.read_text(encoding="utf-8"))
    assert outcome.kind is ResponseKind.REPORT
    report = outcome.report
    assert report.risk.value == 5
    assert report.risk.label == "High Risk"
    high = report.issues_with_priority(IssuePriority.HIGH)
    assert len(high) == 3
    assert any(
        f.framework is Framework.NUREMBERG_CODE
        and f.status is ComplianceStatus.MAJOR_VIOLATION
        for f in report.compliance
    )
    assert validate_report(report) == []
    _ok("2 golden parse - Report, risk 5 High Risk, 3 High issues, "
        "Nuremberg MajorViolation, zero validation warnings")


def test_criterion_3_round_trip_and_fuzz_totality():
    """200 random reports round-trip exactly; 1000 fuzz inputs never abort."""
    rng = random.Random(2024)
    for i in range(200):
        report = random_report(rng)
        outcome = parse_report(render_canonical(report), strict=True)
        assert outcome.kind is ResponseKind.REPORT, (i, outcome.failures)
        assert outcome.report == report, i

    fuzz = random.Random(4048)
    for i in range(1000):
        blob = bytes(fuzz.randrange(256) for _ in range(fuzz.randrange(0, 600)))
        outcome = parse_report(blob.decode("utf-8", errors="replace"))
        assert isinstance(outcome, ParseOutcome)
        assert outcome.kind in (
            ResponseKind.MALFORMED, ResponseKind.REFUSAL, ResponseKind.REPORT
        )
        if outcome.kind is ResponseKind.MALFORMED:
            assert outcome.failures, i
    _ok("3 round-trip - 200 generated reports parse∘render = id; 1000 fuzz inputs total")


def _corpus_provider(cases, miss_id=None):
    responses = {
        case.id: (
            synthesize_miss_response(case)
            if case.id == miss_id
            else synthesize_detection_response(case)
        )
        for case in cases
    }
    return mock_provider_for(cases, responses)


def test_criterion_4_harness_detection_shape():
    """Planted single miss yields exactly 0.9600; perfect mock yields 1.0000."""
    cases = load_bundled_corpus()
    assert len(cases) == 25

    def pipeline_for(provider):
        return lambda submission: run_review(submission, provider)

    perfect, _ = run_corpus(cases, pipeline_for(_corpus_provider(cases)))
    assert perfect.detection_rate == 1.0
    assert perfect.detected == 25

    planted, results = run_corpus(
        cases, pipeline_for(_corpus_provider(cases, miss_id="homeless-labour-incentives"))
    )
    assert planted.detected == 24
    assert planted.detection_rate == 0.96  # 24/25, deterministic, ± 0
    assert "0.9600" in emit_summary(planted, "csv")
    missed = [r for r in results if not r.detected]
    assert [r.id for r in missed] == ["homeless-labour-incentives"]
    _ok("4 harness shape - perfect mock 1.0000, single planted miss 0.9600")


def test_criterion_5_no_retention(tmp_path, monkeypatch):
    """Five full reviews leave no file or log line carrying proposal content."""
    monkeypatch.chdir(tmp_path)
    log_path = tmp_path / "service.log"
    handler = logging.FileHandler(log_path, encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    package_logger = logging.getLogger("ethically")
    previous_level = package_logger.level
    package_logger.setLevel(logging.DEBUG)
    package_logger.addHandler(handler)

    proposals = [
        f"Distinctive proposal number {i}: a longitudinal diary study of "
        f"night-shift couriers in district {i}, including informal payment "
        f"practices and telltale phrase vermilion-{i}-quicksilver."
        for i in range(5)
    ]
    try:
        golden = GOLDEN_REPORT_PATH.read_text(encoding="utf-8")
        config = ServiceConfig(api_key="acceptance-secret")
        client = TestClient(create_app(config, provider=MockProvider([golden])))
        for proposal in proposals:
            response = client.post(
                "/review",
                json={
                    "field_of_research": "Sociology",
                    "country_region": "Austria",
                    "proposal_text": proposal,
                    "pii_confirmed": True,
                },
            )
            assert response.status_code == 200
    finally:
        package_logger.removeHandler(handler)
        package_logger.setLevel(previous_level)
        handler.close()

    files = [p for p in tmp_path.rglob("*") if p.is_file()]
    assert files == [log_path], f"unexpected files created: {files}"
    for path in files:
        content = path.read_text(encoding="utf-8", errors="replace")
        for proposal in proposals:
            windows = {proposal[i : i + 25] for i in range(len(proposal) - 24)}
            for i in range(max(0, len(content) - 24)):
                assert content[i : i + 25] not in windows, (
                    f"proposal content leaked into {path.name}"
                )
    _ok("5 no-retention - 5 reviews, no created file or log line holds a "
        "25-char proposal window")


def test_criterion_6_gateway_semantics():
    """Retry accounting and parallel-run determinism."""
    req = ProviderRequest(system_text="s", user_text="u", model_id="m")
    mock = MockProvider(
        [ProviderError(ErrorKind.OVERLOADED), ProviderError(ErrorKind.OVERLOADED), "ok"]
    )
    result = with_retry(mock, req, RetryPolicy(max_attempts=3), sleep=lambda _: None)
    assert result.attempts == 3

    mock = MockProvider([ProviderError(ErrorKind.AUTH_FAILURE)])
    with pytest.raises(ProviderError) as excinfo:
        with_retry(mock, req, RetryPolicy(max_attempts=3), sleep=lambda _: None)
    assert excinfo.value.attempts == 1

    cases = load_bundled_corpus()
    provider = _corpus_provider(cases, miss_id="records-linkage")

    def pipeline(submission):
        return run_review(submission, provider)

    summary_1, results_1 = run_corpus(cases, pipeline, parallelism=1)
    summary_8, results_8 = run_corpus(cases, pipeline, parallelism=8)
    assert results_1 == results_8
    for fmt in ("json", "csv", "markdown"):
        assert emit_summary(summary_1, fmt) == emit_summary(summary_8, fmt)
    _ok("6 gateway semantics - overloaded*2+success attempts=3, auth attempts=1, "
        "parallel 1 vs 8 byte-identical")
