"""Parse free-text provider reports into validated structures.

Lenient by default: frontier-model output drifts in heading style, numbering
and ornamentation, so headings match case-insensitively and tolerate markdown
decoration, unknown status markers downgrade to Concern with a warning, and
unrecognized sub-content is preserved in warnings rather than dropped. A
strict flag promotes every warning to a failure for canonical fixtures.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .model import (
    DISCLAIMER_KEY_PHRASE,
    ComplianceFinding,
    ComplianceStatus,
    EthicalIssue,
    EthicsReport,
    Framework,
    IssuePriority,
    RiskScore,
    risk_label,
)


class ResponseKind(str, Enum):
    REPORT = "Report"
    REFUSAL = "Refusal"
    MALFORMED = "Malformed"


@dataclass(frozen=True)
class ParseOutcome:
    """Result of parsing one provider response.

    kind=Report implies report is present and failures is empty;
    kind=Malformed implies failures is non-empty.
    """

    kind: ResponseKind
    report: Optional[EthicsReport]
    warnings: tuple[str, ...] = ()
    failures: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        from .model import report_to_dict

        return {
            "kind": self.kind.value,
            "report": report_to_dict(self.report) if self.report else None,
            "warnings": list(self.warnings),
            "failures": list(self.failures),
        }


class NoRiskScoreFound(ValueError):
    """No risk-score declaration line present in the text."""


class AmbiguousRiskScore(ValueError):
    """Multiple risk-score declaration lines carry distinct values."""


class LabelValueMismatch(ValueError):
    """A risk score's label is not the rubric label for its value."""


# Leading ornamentation a heading line may carry: whitespace, markdown
# emphasis/heading markers and blockquotes. Deliberately excludes "-" so
# rubric bullets ("- 5 (High Risk): ...") never read as headings.
_ORN = r"[\s>#*_]*"
_NUM = r"(?:\d+[\.\)]\s*)?"


def _heading(name: str) -> re.Pattern[str]:
    return re.compile(rf"^{_ORN}{_NUM}{_ORN}{name}\s*:?{_ORN}$", re.IGNORECASE)


_SECTION_PATTERNS: dict[str, re.Pattern[str]] = {
    "summary": _heading(r"summary\s+assessment"),
    "compliance": _heading(r"compliance\s+analysis"),
    "issues": _heading(r"potential\s+ethical\s+issues(?:\s+and\s+recommendations)?"),
    # The risk heading usually carries the score on the same line.
    "risk": re.compile(rf"^{_ORN}{_NUM}{_ORN}(?:ethics\s+)?risk\s+score\b.*$", re.IGNORECASE),
    "supplementary": _heading(r"supplementary\s+materials(?:\s+assessment)?"),
}

_SECTION_ORDER = ("summary", "compliance", "issues", "risk", "supplementary")

_PRIORITY_PATTERNS: tuple[tuple[IssuePriority, re.Pattern[str]], ...] = (
    (IssuePriority.HIGH, _heading(r"high\s+priority\s+issues?")),
    (IssuePriority.MODERATE, _heading(r"moderate\s+concerns?")),
    (IssuePriority.MINOR, _heading(r"minor\s+considerations?")),
)

# Declaration line: heading position, "Risk Score", then colon-then-integer.
# Rubric echoes like "5 (High Risk): Fundamental..." put the integer before
# the colon and are excluded by construction.
_RISK_DECLARATION = re.compile(
    rf"^{_ORN}{_NUM}{_ORN}(?:ethics\s+)?risk\s+score\b[^:\n]*:[\s*_]*([1-5])(?![0-9])"
    r"\s*(?:\(([^)\n]*)\))?",
    re.IGNORECASE,
)

_STATUS_MARKERS: tuple[tuple[str, ComplianceStatus], ...] = (
    ("MAJOR VIOLATION", ComplianceStatus.MAJOR_VIOLATION),
    ("MAJOR CONCERN", ComplianceStatus.MAJOR_CONCERN),
    ("NOT APPLICABLE", ComplianceStatus.NOT_APPLICABLE),
    ("ADEQUATE", ComplianceStatus.ADEQUATE),
    ("PARTIAL", ComplianceStatus.PARTIAL),
    ("CONCERN", ComplianceStatus.CONCERN),
)

_MARKER_RE = re.compile(
    r"(?<![A-Za-z])(MAJOR\s+VIOLATION|MAJOR\s+CONCERN|NOT\s+APPLICABLE|ADEQUATE|PARTIAL|CONCERN)"
    r"(?![A-Za-z])\s*:?\s*"
)

# Any other shouting lead word(s) followed by a colon, e.g. "SEVERE:".
_UNKNOWN_MARKER_RE = re.compile(r"^([A-Z][A-Z /-]{2,}?)\s*:\s*")

_FRAMEWORK_KEYWORDS: tuple[tuple[str, Framework], ...] = (
    ("nuremberg", Framework.NUREMBERG_CODE),
    ("belmont", Framework.BELMONT_REPORT),
    ("helsinki", Framework.DECLARATION_OF_HELSINKI),
    ("discipline", Framework.DISCIPLINE_SPECIFIC),
    ("legal", Framework.LEGAL_REGULATORY),
)

_FRAMEWORK_HEADERS: dict[Framework, str] = {
    Framework.NUREMBERG_CODE: "Nuremberg Code Compliance:",
    Framework.BELMONT_REPORT: "Belmont Report Principles:",
    Framework.DECLARATION_OF_HELSINKI: "Declaration of Helsinki Compliance:",
    Framework.DISCIPLINE_SPECIFIC: "Discipline-Specific Standards:",
    Framework.LEGAL_REGULATORY: "Legal and Regulatory Compliance:",
}

_PRIORITY_HEADERS: dict[IssuePriority, str] = {
    IssuePriority.HIGH: "High Priority Issues",
    IssuePriority.MODERATE: "Moderate Concerns",
    IssuePriority.MINOR: "Minor Considerations",
}

_EMPTY_COMPLIANCE = "None recorded."
_EMPTY_ISSUES = "None identified."
_EMPTY_SUPPLEMENTARY = "None provided."

_ISSUE_TITLE_RE = re.compile(r"^\s*(\d+)[\.\)]\s+(.*\S)\s*$")
_PROBLEM_RE = re.compile(r"^\s*(?:\*\*)?problem(?:\*\*)?\s*:\s*(.*)$", re.IGNORECASE)
_RECOMMENDATIONS_RE = re.compile(
    r"^\s*(?:\*\*)?recommendations?(?:\*\*)?\s*:\s*(.*)$", re.IGNORECASE
)
_DECLINE_RE = re.compile(r"declin", re.IGNORECASE)
_CLINICAL_RE = re.compile(r"clinical", re.IGNORECASE)


def _find_sections(text: str) -> dict[str, tuple[int, int]]:
    """Map each detected section to its (heading line start, content start).

    Only the first occurrence of each heading counts; later duplicates fall
    into the preceding section's content.
    """
    found: dict[str, tuple[int, int]] = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.rstrip("\n")
        for section, pattern in _SECTION_PATTERNS.items():
            if section not in found and pattern.match(stripped):
                found[section] = (offset, offset + len(line))
                break
        offset += len(line)
    return found


def _section_body(text: str, sections: dict[str, tuple[int, int]], name: str) -> str:
    """Content of one section: from after its heading to the next heading."""
    if name not in sections:
        return ""
    start = sections[name][1]
    following = sorted(pos for key, (pos, _) in sections.items() if pos > sections[name][0])
    end = following[0] if following else len(text)
    return text[start:end]


def _has_risk_declaration(text: str) -> bool:
    return any(_RISK_DECLARATION.match(line) for line in text.splitlines())


def classify_response(text: str) -> ResponseKind:
    """Sort a provider response into Report, Refusal or Malformed.

    Report: the five-section skeleton is detectable. Refusal: no report
    structure, decline and clinical-scope wording present, and no risk-score
    declaration (both conditions required so reports about clinical-adjacent
    research are not misread as declines). Malformed otherwise.
    """
    if not text or not text.strip():
        return ResponseKind.MALFORMED
    sections = _find_sections(text)
    if all(name in sections for name in _SECTION_ORDER):
        return ResponseKind.REPORT
    if (
        _DECLINE_RE.search(text)
        and _CLINICAL_RE.search(text)
        and not _has_risk_declaration(text)
    ):
        return ResponseKind.REFUSAL
    return ResponseKind.MALFORMED


def extract_risk_score(text: str) -> RiskScore:
    """Pull the 1..5 risk score from its declaration line.

    Declaration lines are heading-positioned "Risk Score" lines followed by a
    colon and an integer; rubric echoes never match. When several declaration
    lines agree, the first one after the issues section wins; distinct values
    raise AmbiguousRiskScore rather than silently picking one.
    """
    lines = text.splitlines()
    declarations: list[tuple[int, int, Optional[str]]] = []
    offset = 0
    for line in lines:
        match = _RISK_DECLARATION.match(line)
        if match:
            label = match.group(2)
            declarations.append((offset, int(match.group(1)), label.strip() if label else None))
        offset += len(line) + 1
    if not declarations:
        raise NoRiskScoreFound("no risk-score declaration line found")
    values = {value for _, value, _ in declarations}
    if len(values) > 1:
        raise AmbiguousRiskScore(
            f"conflicting risk-score declarations: {sorted(values)}"
        )
    sections = _find_sections(text)
    chosen = declarations[0]
    if "issues" in sections:
        after = [d for d in declarations if d[0] >= sections["issues"][0]]
        if after:
            chosen = after[0]
    pos, value, label = chosen
    justification = _trailing_justification(text, pos)
    return RiskScore(
        value=value,
        label=label if label is not None else risk_label(value),
        justification=justification,
    )


def _trailing_justification(text: str, declaration_pos: int) -> str:
    """Lines after the declaration up to the next section heading."""
    tail = text[declaration_pos:]
    lines = tail.splitlines()[1:]
    collected: list[str] = []
    for line in lines:
        stripped = line.strip()
        if any(p.match(line.rstrip("\n")) for p in _SECTION_PATTERNS.values()):
            break
        if stripped:
            collected.append(stripped)
    if collected:
        collected[0] = re.sub(
            r"^(?:\*\*)?justification(?:\*\*)?\s*:\s*", "", collected[0], flags=re.IGNORECASE
        )
    return "\n".join(c for c in collected if c).strip()


def _looks_like_subheading(line: str) -> bool:
    """Short colon-less title lines are structure, not content."""
    return len(line) <= 48 and ":" not in line and not line.endswith(".")


def _parse_compliance(
    body: str, warnings: list[str]
) -> tuple[ComplianceFinding, ...]:
    findings: list[ComplianceFinding] = []
    current: Optional[Framework] = None
    for raw in body.splitlines():
        line = raw.strip()
        if not line or line == _EMPTY_COMPLIANCE:
            continue
        marker = _MARKER_RE.search(line)
        if marker:
            normalized = re.sub(r"\s+", " ", marker.group(1))
            status = dict(_STATUS_MARKERS)[normalized]
            prefix = line[: marker.start()].strip(" -:–—").strip()
            suffix = line[marker.end():].strip()
            detail = f"{prefix}: {suffix}" if prefix else suffix
            framework = current
            if framework is None:
                framework = Framework.DISCIPLINE_SPECIFIC
                warnings.append(
                    f"compliance: finding before any framework heading, "
                    f"filed under DisciplineSpecific: {line[:60]}"
                )
            findings.append(ComplianceFinding(framework=framework, status=status, detail=detail))
            continue
        switched = False
        if len(line) <= 80:
            lowered = line.lower()
            for keyword, framework in _FRAMEWORK_KEYWORDS:
                if keyword in lowered:
                    current = framework
                    switched = True
                    break
        if switched:
            continue
        unknown = _UNKNOWN_MARKER_RE.match(line)
        if unknown and current is not None:
            findings.append(
                ComplianceFinding(
                    framework=current,
                    status=ComplianceStatus.CONCERN,
                    detail=line[unknown.end():].strip(),
                )
            )
            warnings.append(
                f"compliance: unknown status marker {unknown.group(1)!r} read as Concern"
            )
            continue
        if _looks_like_subheading(line):
            continue
        warnings.append(f"compliance: unparsed detail preserved: {line[:80]}")
    return tuple(findings)


def _parse_issues(body: str, warnings: list[str]) -> tuple[EthicalIssue, ...]:
    issues: list[EthicalIssue] = []
    group: Optional[IssuePriority] = None
    title: Optional[str] = None
    priority: Optional[IssuePriority] = None
    problem_lines: list[str] = []
    recs: list[str] = []
    mode = ""

    def flush() -> None:
        nonlocal title, problem_lines, recs, mode
        if title is not None:
            issues.append(
                EthicalIssue(
                    priority=priority or IssuePriority.HIGH,
                    title=title,
                    problem="\n".join(problem_lines).strip(),
                    recommendations=tuple(recs),
                )
            )
        title = None
        problem_lines = []
        recs = []
        mode = ""

    for raw in body.splitlines():
        line = raw.strip()
        if not line:
            if mode == "problem":
                mode = ""
            continue
        if line == _EMPTY_ISSUES:
            continue
        matched_group = next(
            (p for p, pattern in _PRIORITY_PATTERNS if pattern.match(line)), None
        )
        if matched_group is not None:
            flush()
            group = matched_group
            continue
        title_match = _ISSUE_TITLE_RE.match(line)
        if title_match:
            flush()
            if group is None:
                warnings.append(
                    f"issues: numbered issue before any priority heading, "
                    f"read as High: {title_match.group(2)[:60]}"
                )
            title = title_match.group(2)
            priority = group or IssuePriority.HIGH
            continue
        problem_match = _PROBLEM_RE.match(line)
        if problem_match:
            problem_lines = [problem_match.group(1).strip()] if problem_match.group(1).strip() else []
            mode = "problem"
            continue
        recs_match = _RECOMMENDATIONS_RE.match(line)
        if recs_match:
            mode = "recs"
            inline = recs_match.group(1).strip()
            if inline:
                recs.append(inline)
            continue
        if title is None:
            warnings.append(f"issues: unparsed content preserved: {line[:80]}")
            continue
        content = re.sub(r"^[-*•]\s*", "", line)
        if mode == "recs":
            recs.append(content)
        else:
            problem_lines.append(content)
            mode = "problem"
    flush()
    return tuple(issues)


def parse_report(text: str, strict: bool = False) -> ParseOutcome:
    """Convert a provider response into a ParseOutcome; total over any input.

    Lenient mode records drift in warnings; strict mode promotes every
    warning to a failure so canonical fixtures must parse perfectly clean.
    """
    kind = classify_response(text)
    if kind is ResponseKind.REFUSAL:
        return ParseOutcome(kind=kind, report=None)
    if kind is ResponseKind.MALFORMED:
        return ParseOutcome(
            kind=kind,
            report=None,
            failures=("response lacks the five-section report structure",),
        )

    warnings: list[str] = []
    failures: list[str] = []
    sections = _find_sections(text)

    preamble = text[: sections["summary"][0]].strip()
    disclaimer = preamble
    if "DISCLAIMER" not in preamble:
        warnings.append("report does not open with a DISCLAIMER block")

    summary = _section_body(text, sections, "summary").strip()
    if not summary:
        failures.append("summary assessment section is empty")

    compliance = _parse_compliance(_section_body(text, sections, "compliance"), warnings)
    issues = _parse_issues(_section_body(text, sections, "issues"), warnings)

    risk: Optional[RiskScore] = None
    try:
        risk = extract_risk_score(text)
    except (NoRiskScoreFound, AmbiguousRiskScore) as exc:
        failures.append(f"{type(exc).__name__}: {exc}")
    if risk is not None and not risk.label_matches_value():
        failures.append(
            f"LabelValueMismatch: declared label {risk.label!r} is not the rubric "
            f"label for score {risk.value}"
        )

    supplementary_raw = _section_body(text, sections, "supplementary").strip()
    supplementary = (
        None if supplementary_raw in ("", _EMPTY_SUPPLEMENTARY) else supplementary_raw
    )

    for issue in issues:
        if issue.priority is IssuePriority.HIGH and not issue.recommendations:
            warnings.append(f"issues: High issue without recommendations: {issue.title[:60]}")

    if strict and warnings:
        failures.extend(f"strict: {w}" for w in warnings)

    if failures or risk is None:
        return ParseOutcome(
            kind=ResponseKind.MALFORMED,
            report=None,
            warnings=tuple(warnings),
            failures=tuple(failures),
        )

    report = EthicsReport(
        disclaimer=disclaimer,
        summary_assessment=summary,
        compliance=compliance,
        issues=issues,
        risk=risk,
        supplementary_assessment=supplementary,
        raw_text=text,
    )
    return ParseOutcome(
        kind=ResponseKind.REPORT,
        report=report,
        warnings=tuple(warnings),
    )


def validate_report(r: EthicsReport) -> list[str]:
    """Consistency warnings for a structurally valid report.

    A rubric label/value mismatch is a hard failure and raises
    LabelValueMismatch; everything else is the model's judgment call and only
    warrants a warning.
    """
    if not r.risk.label_matches_value():
        raise LabelValueMismatch(
            f"label {r.risk.label!r} is not the rubric label for value {r.risk.value}"
        )
    warnings: list[str] = []
    if DISCLAIMER_KEY_PHRASE not in r.disclaimer:
        warnings.append(
            f"disclaimer is missing the phrase {DISCLAIMER_KEY_PHRASE!r}"
        )
    high_issues = r.issues_with_priority(IssuePriority.HIGH)
    if high_issues and r.risk.value < 3:
        warnings.append(
            f"consistency: {len(high_issues)} High-priority issue(s) but risk score "
            f"is only {r.risk.value}"
        )
    for issue in high_issues:
        if not issue.recommendations:
            warnings.append(f"High issue {issue.title!r} carries no recommendations")
    return warnings


def render_canonical(r: EthicsReport) -> str:
    """Deterministic canonical text form; parse_report inverts it exactly.

    Framework and priority headers are emitted whenever the value changes,
    so any finding/issue ordering round-trips; issues are numbered
    continuously across priority groups.
    """
    parts: list[str] = []
    if r.disclaimer:
        parts.append(r.disclaimer)

    parts.append("1. Summary Assessment")
    parts.append(r.summary_assessment)

    parts.append("2. Compliance Analysis")
    if r.compliance:
        block: list[str] = []
        current: Optional[Framework] = None
        for finding in r.compliance:
            if finding.framework != current:
                if block:
                    parts.append("\n".join(block))
                    block = []
                current = finding.framework
                block.append(_FRAMEWORK_HEADERS[current])
            marker = next(m for m, s in _STATUS_MARKERS if s is finding.status)
            block.append(f"{marker}: {finding.detail}".rstrip())
        parts.append("\n".join(block))
    else:
        parts.append(_EMPTY_COMPLIANCE)

    parts.append("3. Potential Ethical Issues and Recommendations")
    if r.issues:
        group: Optional[IssuePriority] = None
        for number, issue in enumerate(r.issues, start=1):
            if issue.priority != group:
                group = issue.priority
                parts.append(_PRIORITY_HEADERS[group])
            lines = [f"{number}. {issue.title}"]
            if issue.problem:
                lines.append(f"Problem: {issue.problem}")
            if issue.recommendations:
                lines.append("Recommendations:")
                lines.extend(f"- {rec}" for rec in issue.recommendations)
            parts.append("\n".join(lines))
    else:
        parts.append(_EMPTY_ISSUES)

    risk_lines = [f"4. Ethics Risk Score: {r.risk.value} ({r.risk.label})"]
    if r.risk.justification:
        risk_lines.append(f"Justification: {r.risk.justification}")
    parts.append("\n".join(risk_lines))

    parts.append("5. Supplementary Materials Assessment")
    parts.append(
        r.supplementary_assessment
        if r.supplementary_assessment is not None
        else _EMPTY_SUPPLEMENTARY
    )

    return "\n\n".join(parts) + "\n"
