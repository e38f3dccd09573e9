"""AI-powered research ethics support for the social sciences and humanities.

Submodules: model (domain types), prompting (prompt assembly), parsing
(report parsing), gateway (provider transport), guardrails (privacy/scope),
harness (corpus evaluation), pipeline (orchestration), service (HTTP API),
cli (command line).
"""

from .model import (
    CANONICAL_DISCLAIMER,
    CONTEXTUAL_PRINCIPLES,
    ESSENTIAL_PRINCIPLES,
    RISK_RUBRIC,
    ComplianceFinding,
    ComplianceStatus,
    EthicalIssue,
    EthicsReport,
    Framework,
    IssuePriority,
    PrincipleCatalog,
    ProposalSubmission,
    RiskScore,
    risk_label,
    validate_submission,
)
from .parsing import ParseOutcome, ResponseKind, classify_response, parse_report, render_canonical
from .pipeline import ReviewOutcome, run_review

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_DISCLAIMER",
    "CONTEXTUAL_PRINCIPLES",
    "ESSENTIAL_PRINCIPLES",
    "RISK_RUBRIC",
    "ComplianceFinding",
    "ComplianceStatus",
    "EthicalIssue",
    "EthicsReport",
    "Framework",
    "IssuePriority",
    "ParseOutcome",
    "PrincipleCatalog",
    "ProposalSubmission",
    "ResponseKind",
    "ReviewOutcome",
    "RiskScore",
    "classify_response",
    "parse_report",
    "render_canonical",
    "risk_label",
    "run_review",
    "validate_submission",
    "__version__",
]
