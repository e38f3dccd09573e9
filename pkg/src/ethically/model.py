"""Shared domain types: submissions, reports, principle catalogs, risk rubric.

Every other module depends on this one; it depends on nothing but the
standard library. All types are immutable value objects and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

DEFAULT_MAX_PROPOSAL_CHARS = 60_000

# The six principles every proposal must adhere to, in canonical order.
ESSENTIAL_PRINCIPLES: tuple[str, ...] = (
    "Informed Consent",
    "Beneficence and non-maleficence",
    "Respect for Persons",
    "Confidentiality",
    "Conflict of Interest",
    "Social Justice",
)

# The six principles applied where relevant, in canonical order.
CONTEXTUAL_PRINCIPLES: tuple[str, ...] = (
    "Reflexivity",
    "Cultural sensitivity",
    "Intellectual Property",
    "Recognition vs. Anonymity",
    "Trauma-informed Approaches",
    "Political Economy Considerations",
)

# Rubric labels keyed by score value; labels are pairwise distinct.
RISK_RUBRIC: dict[int, str] = {
    1: "Low Risk",
    2: "Low-Moderate Risk",
    3: "Moderate Risk",
    4: "Moderate-High Risk",
    5: "High Risk",
}

# Mandatory opening disclaimer for every generated report.
CANONICAL_DISCLAIMER = (
    "DISCLAIMER: This ethics review is generated by an artificial intelligence "
    "system for research and educational purposes only. While this analysis "
    "applies established ethical frameworks and guidelines, it cannot replace "
    "human ethical oversight, institutional review board (IRB) approval, or "
    "professional ethics consultation. AI-generated reviews may miss nuanced "
    "cultural, contextual, or novel ethical considerations that require human "
    "judgment. This report should be used as a supplementary tool to support, "
    "not substitute for, proper human ethics review processes."
)

DISCLAIMER_KEY_PHRASE = "cannot replace human ethical oversight"


class OutOfRangeRiskScore(ValueError):
    """Risk score value outside the 1..5 rubric."""


def risk_label(value: int) -> str:
    """Return the rubric label for a 1..5 risk score.

    Raises OutOfRangeRiskScore for any other value.
    """
    try:
        return RISK_RUBRIC[value]
    except (KeyError, TypeError):
        raise OutOfRangeRiskScore(f"risk score must be an integer in 1..5, got {value!r}") from None


class Framework(str, Enum):
    """Compliance frameworks a report may check against."""

    NUREMBERG_CODE = "NurembergCode"
    BELMONT_REPORT = "BelmontReport"
    DECLARATION_OF_HELSINKI = "DeclarationOfHelsinki"
    DISCIPLINE_SPECIFIC = "DisciplineSpecific"
    LEGAL_REGULATORY = "LegalRegulatory"


class ComplianceStatus(str, Enum):
    """Closed set of compliance statuses.

    Merges the capitalized markers frontier models emit (ADEQUATE, PARTIAL,
    CONCERN, MAJOR CONCERN, MAJOR VIOLATION) plus NotApplicable.
    """

    ADEQUATE = "Adequate"
    PARTIAL = "Partial"
    CONCERN = "Concern"
    MAJOR_CONCERN = "MajorConcern"
    MAJOR_VIOLATION = "MajorViolation"
    NOT_APPLICABLE = "NotApplicable"


class IssuePriority(str, Enum):
    HIGH = "High"
    MODERATE = "Moderate"
    MINOR = "Minor"


# Higher rank = more severe; used for threshold comparisons.
PRIORITY_RANK: dict[IssuePriority, int] = {
    IssuePriority.HIGH: 3,
    IssuePriority.MODERATE: 2,
    IssuePriority.MINOR: 1,
}


def _as_tuple(value: Any) -> tuple:
    return tuple(value) if not isinstance(value, tuple) else value


@dataclass(frozen=True)
class ProposalSubmission:
    """A researcher's review request as entered in the form or CLI.

    field_of_research, country_region and proposal_text must be non-empty
    after trimming; proposal_text is length-bounded (see validate_submission).
    """

    field_of_research: str
    country_region: str
    proposal_text: str
    supplementary_materials: Optional[str] = None
    pii_confirmed: bool = False


@dataclass(frozen=True)
class ValidationFailure:
    """One violated submission invariant, machine-readable."""

    code: str
    field: str
    message: str


def validate_submission(
    s: ProposalSubmission,
    max_proposal_chars: int = DEFAULT_MAX_PROPOSAL_CHARS,
) -> list[ValidationFailure]:
    """Check every submission invariant; empty list means valid.

    Total and deterministic: same input yields the same failure list in the
    same order (fields are checked in declaration order).
    """
    failures: list[ValidationFailure] = []
    for field_name in ("field_of_research", "country_region", "proposal_text"):
        value = getattr(s, field_name)
        if not isinstance(value, str) or not value.strip():
            failures.append(
                ValidationFailure(
                    code="EmptyField",
                    field=field_name,
                    message=f"{field_name} must be non-empty",
                )
            )
    if isinstance(s.proposal_text, str) and len(s.proposal_text) > max_proposal_chars:
        failures.append(
            ValidationFailure(
                code="ProposalTooLong",
                field="proposal_text",
                message=(
                    f"proposal_text is {len(s.proposal_text)} characters; "
                    f"the maximum is {max_proposal_chars}"
                ),
            )
        )
    if not isinstance(s.pii_confirmed, bool):
        failures.append(
            ValidationFailure(
                code="InvalidType",
                field="pii_confirmed",
                message="pii_confirmed must be a boolean",
            )
        )
    return failures


@dataclass(frozen=True)
class PrincipleCatalog:
    """The fixed 6+6 principle catalog; immutable at runtime.

    Constructing a catalog with any other content is a programming error.
    """

    essential: tuple[str, ...] = ESSENTIAL_PRINCIPLES
    contextual: tuple[str, ...] = CONTEXTUAL_PRINCIPLES

    def __post_init__(self) -> None:
        object.__setattr__(self, "essential", _as_tuple(self.essential))
        object.__setattr__(self, "contextual", _as_tuple(self.contextual))
        if self.essential != ESSENTIAL_PRINCIPLES:
            raise ValueError("essential principles must match the canonical catalog")
        if self.contextual != CONTEXTUAL_PRINCIPLES:
            raise ValueError("contextual principles must match the canonical catalog")


DEFAULT_CATALOG = PrincipleCatalog()


@dataclass(frozen=True)
class RiskScore:
    """1..5 ethics risk score with its rubric label and justification.

    The label must be the rubric label for the value; parsers may construct
    mismatched instances from drifting model output, which validators then
    reject as a hard failure (see parsing.validate_report).
    """

    value: int
    label: str
    justification: str = ""

    @classmethod
    def from_value(cls, value: int, justification: str = "") -> "RiskScore":
        return cls(value=value, label=risk_label(value), justification=justification)

    def label_matches_value(self) -> bool:
        return self.value in RISK_RUBRIC and self.label == RISK_RUBRIC[self.value]


@dataclass(frozen=True)
class ComplianceFinding:
    """One framework compliance check outcome.

    detail should be non-empty unless status is NotApplicable.
    """

    framework: Framework
    status: ComplianceStatus
    detail: str = ""


@dataclass(frozen=True)
class EthicalIssue:
    """One identified ethical issue with actionable recommendations.

    High-priority issues must carry at least one recommendation; lenient
    parsing may produce violations, flagged by validate_report.
    """

    priority: IssuePriority
    title: str
    problem: str = ""
    recommendations: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "recommendations", _as_tuple(self.recommendations))

    def search_text(self) -> str:
        """Lowercased title + problem + recommendations, for marker matching."""
        return "\n".join((self.title, self.problem, *self.recommendations)).lower()


@dataclass(frozen=True)
class EthicsReport:
    """The parsed five-section ethics report.

    raw_text carries the provider output verbatim and is excluded from
    structural equality so round-tripped reports compare equal.
    """

    disclaimer: str
    summary_assessment: str
    compliance: tuple[ComplianceFinding, ...]
    issues: tuple[EthicalIssue, ...]
    risk: RiskScore
    supplementary_assessment: Optional[str] = None
    raw_text: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "compliance", _as_tuple(self.compliance))
        object.__setattr__(self, "issues", _as_tuple(self.issues))

    def has_disclaimer_phrase(self) -> bool:
        return DISCLAIMER_KEY_PHRASE in self.disclaimer

    def issues_with_priority(self, priority: IssuePriority) -> tuple[EthicalIssue, ...]:
        return tuple(i for i in self.issues if i.priority == priority)


def report_to_dict(r: EthicsReport) -> dict[str, Any]:
    """Canonical structured serialization used by the API and CLI.

    Field names are part of the external contract: disclaimer,
    summary_assessment, compliance, issues, risk, supplementary_assessment.
    """
    return {
        "disclaimer": r.disclaimer,
        "summary_assessment": r.summary_assessment,
        "compliance": [
            {"framework": f.framework.value, "status": f.status.value, "detail": f.detail}
            for f in r.compliance
        ],
        "issues": [
            {
                "priority": i.priority.value,
                "title": i.title,
                "problem": i.problem,
                "recommendations": list(i.recommendations),
            }
            for i in r.issues
        ],
        "risk": {
            "value": r.risk.value,
            "label": r.risk.label,
            "justification": r.risk.justification,
        },
        "supplementary_assessment": r.supplementary_assessment,
    }


def report_from_dict(data: dict[str, Any], raw_text: str = "") -> EthicsReport:
    """Inverse of report_to_dict."""
    return EthicsReport(
        disclaimer=data["disclaimer"],
        summary_assessment=data["summary_assessment"],
        compliance=tuple(
            ComplianceFinding(
                framework=Framework(f["framework"]),
                status=ComplianceStatus(f["status"]),
                detail=f.get("detail", ""),
            )
            for f in data["compliance"]
        ),
        issues=tuple(
            EthicalIssue(
                priority=IssuePriority(i["priority"]),
                title=i["title"],
                problem=i.get("problem", ""),
                recommendations=tuple(i.get("recommendations", ())),
            )
            for i in data["issues"]
        ),
        risk=RiskScore(
            value=data["risk"]["value"],
            label=data["risk"]["label"],
            justification=data["risk"].get("justification", ""),
        ),
        supplementary_assessment=data.get("supplementary_assessment"),
        raw_text=raw_text,
    )
