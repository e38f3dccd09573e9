"""Domain-type invariants: submission validation, rubric, catalogs."""

import dataclasses

import pytest

from ethically.model import (
    CONTEXTUAL_PRINCIPLES,
    DEFAULT_CATALOG,
    DEFAULT_MAX_PROPOSAL_CHARS,
    ESSENTIAL_PRINCIPLES,
    RISK_RUBRIC,
    EthicsReport,
    OutOfRangeRiskScore,
    PrincipleCatalog,
    ProposalSubmission,
    RiskScore,
    report_from_dict,
    report_to_dict,
    risk_label,
    validate_submission,
)
from helpers import random_report
import random


def submission(**overrides) -> ProposalSubmission:
    base = dict(
        field_of_research="Anthropology",
        country_region="Austria",
        proposal_text="An interview study of commuting practices. " * 40,
        pii_confirmed=True,
    )
    base.update(overrides)
    return ProposalSubmission(**base)


class TestValidateSubmission:
    def test_valid_submission_passes(self):
        assert validate_submission(submission()) == []

    def test_empty_field_of_research(self):
        failures = validate_submission(submission(field_of_research=""))
        assert [f.code for f in failures] == ["EmptyField"]
        assert failures[0].field == "field_of_research"

    def test_whitespace_only_counts_as_empty(self):
        failures = validate_submission(submission(country_region="   \t"))
        assert [(f.code, f.field) for f in failures] == [("EmptyField", "country_region")]

    def test_proposal_one_char_past_limit_fails(self):
        # Derived from the configured limit: length max+1 must fail, max must pass.
        text = "x" * (DEFAULT_MAX_PROPOSAL_CHARS + 1)
        failures = validate_submission(submission(proposal_text=text))
        assert [f.code for f in failures] == ["ProposalTooLong"]
        assert validate_submission(
            submission(proposal_text="x" * DEFAULT_MAX_PROPOSAL_CHARS)
        ) == []

    def test_custom_limit_respected(self):
        failures = validate_submission(
            submission(proposal_text="abcdef"), max_proposal_chars=5
        )
        assert [f.code for f in failures] == ["ProposalTooLong"]

    def test_multiple_failures_in_field_order(self):
        failures = validate_submission(
            submission(field_of_research="", country_region="", proposal_text="")
        )
        assert [f.field for f in failures] == [
            "field_of_research",
            "country_region",
            "proposal_text",
        ]

    def test_idempotent_and_order_stable(self):
        s = submission(field_of_research="", proposal_text="")
        assert validate_submission(s) == validate_submission(s)


class TestRiskLabel:
    @pytest.mark.parametrize(
        "value,label",
        [
            (1, "Low Risk"),
            (2, "Low-Moderate Risk"),
            (3, "Moderate Risk"),
            (4, "Moderate-High Risk"),
            (5, "High Risk"),
        ],
    )
    def test_rubric_labels(self, value, label):
        assert risk_label(value) == label

    @pytest.mark.parametrize("value", [0, 6, -1, 100])
    def test_out_of_range_raises(self, value):
        with pytest.raises(OutOfRangeRiskScore):
            risk_label(value)

    def test_labels_pairwise_distinct(self):
        labels = [risk_label(v) for v in range(1, 6)]
        assert len(set(labels)) == 5

    def test_from_value_builds_matching_label(self):
        score = RiskScore.from_value(4, "justified")
        assert score.label == "Moderate-High Risk"
        assert score.label_matches_value()


class TestPrincipleCatalog:
    def test_default_catalog_contents(self):
        assert DEFAULT_CATALOG.essential == ESSENTIAL_PRINCIPLES
        assert DEFAULT_CATALOG.contextual == CONTEXTUAL_PRINCIPLES
        assert len(DEFAULT_CATALOG.essential) == 6
        assert len(DEFAULT_CATALOG.contextual) == 6

    def test_catalog_is_immutable(self):
        with pytest.raises(dataclasses.FrozenInstanceError):
            DEFAULT_CATALOG.essential = ()

    def test_non_canonical_catalog_rejected(self):
        with pytest.raises(ValueError):
            PrincipleCatalog(essential=("Something Else",) * 6)


class TestReportSerialization:
    def test_field_names_are_the_external_contract(self):
        rng = random.Random(7)
        data = report_to_dict(random_report(rng))
        assert list(data) == [
            "disclaimer",
            "summary_assessment",
            "compliance",
            "issues",
            "risk",
            "supplementary_assessment",
        ]

    def test_round_trip(self):
        rng = random.Random(13)
        for _ in range(50):
            report = random_report(rng)
            assert report_from_dict(report_to_dict(report)) == report

    def test_raw_text_excluded_from_equality(self):
        rng = random.Random(3)
        report = random_report(rng)
        other = dataclasses.replace(report, raw_text="different transcript")
        assert report == other

    def test_disclaimer_phrase_detection(self):
        rng = random.Random(5)
        report = random_report(rng)
        assert report.has_disclaimer_phrase()
        stripped = dataclasses.replace(report, disclaimer="missing")
        assert not stripped.has_disclaimer_phrase()
