"""Shared test helpers: seeded random-report generator and fixtures path."""

from __future__ import annotations

import random
from pathlib import Path

from ethically.model import (
    CANONICAL_DISCLAIMER,
    ComplianceFinding,
    ComplianceStatus,
    EthicalIssue,
    EthicsReport,
    Framework,
    IssuePriority,
    RiskScore,
)

DATA_DIR = Path(__file__).parent / "data"

GOLDEN_REPORT_PATH = DATA_DIR / "clinician_dual_role_report.txt"

# Vocabulary avoids every structural keyword (section/priority headings,
# status markers, risk/score, sentinels) so generated prose can never be
# misread as report structure.
_WORDS = (
    "the study participants community data gathering interview survey archive "
    "fieldwork researcher committee oversight protocol privacy welfare access "
    "support analysis method design benefit culture context language region "
    "practice training consent documentation procedure safeguards outline "
    "framework balance clarity depth engagement feedback iteration outcome"
).split()

_TITLE_WORDS = (
    "Consent Process Documentation Gaps Handling Ambiguity Recruitment Boundary "
    "Withdrawal Pathway Storage Clarity Feedback Loop Training Coverage Scope "
    "Compensation Framing Anonymisation Depth Oversight Cadence"
).split()


def sentence(rng: random.Random, lo: int = 5, hi: int = 12) -> str:
    words = [rng.choice(_WORDS) for _ in range(rng.randint(lo, hi))]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def title(rng: random.Random) -> str:
    return " ".join(rng.choice(_TITLE_WORDS) for _ in range(rng.randint(2, 4)))


def random_report(rng: random.Random) -> EthicsReport:
    """A structurally valid report drawn from the full value space."""
    compliance = []
    for _ in range(rng.randint(0, 6)):
        status = rng.choice(list(ComplianceStatus))
        detail = sentence(rng)
        if status is ComplianceStatus.NOT_APPLICABLE and rng.random() < 0.5:
            detail = ""
        compliance.append(
            ComplianceFinding(
                framework=rng.choice(list(Framework)), status=status, detail=detail
            )
        )
    issues = []
    for _ in range(rng.randint(0, 5)):
        issues.append(
            EthicalIssue(
                priority=rng.choice(list(IssuePriority)),
                title=title(rng),
                problem=sentence(rng) if rng.random() < 0.8 else "",
                recommendations=tuple(
                    sentence(rng, 4, 9) for _ in range(rng.randint(1, 3))
                ),
            )
        )
    return EthicsReport(
        disclaimer=CANONICAL_DISCLAIMER,
        summary_assessment=" ".join(sentence(rng) for _ in range(rng.randint(1, 2))),
        compliance=tuple(compliance),
        issues=tuple(issues),
        risk=RiskScore.from_value(
            rng.randint(1, 5),
            sentence(rng) if rng.random() < 0.8 else "",
        ),
        supplementary_assessment=(
            None
            if rng.random() < 0.5
            else "\n".join(sentence(rng) for _ in range(rng.randint(1, 2)))
        ),
    )
