/** DOM rendering for report, refusal and error panels. */

import { renderRiskBadge } from './badge.js';
import type {
  EthicsReport,
  IssuePriority,
  ProviderErrorPayload,
  RejectionPayload,
  ReviewResponse,
} from './types.js';

export const BUSY_MESSAGE =
  "Claude's servers may be busy - please try again in a few minutes.";

const PRIORITY_ORDER: IssuePriority[] = ['High', 'Moderate', 'Minor'];

const PRIORITY_HEADINGS: Record<IssuePriority, string> = {
  High: 'High Priority Issues',
  Moderate: 'Moderate Concerns',
  Minor: 'Minor Considerations',
};

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function issueCard(issue: EthicsReport['issues'][number]): HTMLElement {
  const card = el('article', `issue-card priority-${issue.priority.toLowerCase()}`);
  card.append(el('h4', 'issue-title', issue.title));
  if (issue.problem) card.append(el('p', 'issue-problem', issue.problem));
  if (issue.recommendations.length > 0) {
    card.append(el('p', 'issue-recs-label', 'Recommendations:'));
    const list = el('ul', 'issue-recs');
    for (const rec of issue.recommendations) list.append(el('li', undefined, rec));
    card.append(list);
  }
  return card;
}

/** Structured report view; the disclaimer block is always rendered first. */
export function renderReportView(data: ReviewResponse): HTMLElement {
  const report = data.report as EthicsReport;
  const view = el('section', 'report-view');

  view.append(el('div', 'report-disclaimer', report.disclaimer));

  const scoreRow = el('div', 'score-row');
  scoreRow.append(el('span', 'score-label', 'Ethics Risk Score: '));
  scoreRow.append(renderRiskBadge(report.risk));
  view.append(scoreRow);

  view.append(el('h3', undefined, 'Summary Assessment'));
  view.append(el('p', 'summary-assessment', report.summary_assessment));

  for (const priority of PRIORITY_ORDER) {
    const issues = report.issues.filter((issue) => issue.priority === priority);
    if (issues.length === 0) continue;
    view.append(el('h3', `issue-group-${priority.toLowerCase()}`, PRIORITY_HEADINGS[priority]));
    for (const issue of issues) view.append(issueCard(issue));
  }

  if (report.compliance.length > 0) {
    view.append(el('h3', undefined, 'Compliance Analysis'));
    const list = el('ul', 'compliance-list');
    for (const finding of report.compliance) {
      list.append(
        el('li', `compliance-${finding.status.toLowerCase()}`,
          `${finding.framework}: ${finding.status}${finding.detail ? ' - ' + finding.detail : ''}`),
      );
    }
    view.append(list);
  }

  if (report.risk.justification) {
    view.append(el('p', 'risk-justification', `Justification: ${report.risk.justification}`));
  }

  if (report.supplementary_assessment) {
    view.append(el('h3', undefined, 'Supplementary Materials Assessment'));
    view.append(el('p', 'supplementary-assessment', report.supplementary_assessment));
  }

  if (data.notices.length > 0) {
    const notices = el('ul', 'notice-list');
    for (const notice of data.notices) notices.append(el('li', undefined, notice));
    view.append(notices);
  }
  if (data.warnings.length > 0) {
    const warnings = el('ul', 'warning-list');
    for (const warning of data.warnings) warnings.append(el('li', undefined, warning));
    view.append(warnings);
  }
  return view;
}

/** The model's polite decline, rendered prominently and without a badge. */
export function renderRefusalView(rawText: string): HTMLElement {
  const panel = el('section', 'refusal-panel');
  panel.append(el('h3', undefined, 'Review declined'));
  panel.append(el('p', 'refusal-text', rawText));
  return panel;
}

export function renderBusyPanel(payload: ProviderErrorPayload | null): HTMLElement {
  const panel = el('section', 'error-panel busy-panel');
  const hint = payload && payload.hint ? payload.hint : BUSY_MESSAGE;
  panel.append(el('p', 'busy-message', hint));
  return panel;
}

/** Validation/guardrail rejection: message list plus offending field names. */
export function renderRejectionPanel(
  payload: RejectionPayload | null,
): { panel: HTMLElement; invalidFields: string[] } {
  const panel = el('section', 'error-panel rejection-panel');
  panel.append(el('p', undefined, 'The submission was not accepted:'));
  const list = el('ul', 'rejection-list');
  const invalidFields: string[] = [];
  for (const failure of payload?.failures ?? []) {
    invalidFields.push(failure.field);
    list.append(el('li', undefined, failure.message));
  }
  for (const reason of payload?.reasons ?? []) {
    if (reason === 'PiiNotConfirmed') {
      invalidFields.push('pii_confirmed');
      list.append(
        el('li', undefined,
          'Please confirm that personally identifying information has been removed.'),
      );
    } else {
      list.append(el('li', undefined, reason));
    }
  }
  panel.append(list);
  return { panel, invalidFields };
}

export function renderMalformedPanel(payload: Partial<ReviewResponse> | null): HTMLElement {
  const panel = el('section', 'error-panel malformed-panel');
  panel.append(
    el('p', undefined,
      'The model returned text that could not be parsed into a structured report. Raw output:'),
  );
  panel.append(el('pre', 'raw-output', payload?.raw_text ?? ''));
  return panel;
}

export function renderNetworkPanel(onRetry: () => void): HTMLElement {
  const panel = el('section', 'error-panel network-panel');
  panel.append(el('p', undefined, BUSY_MESSAGE));
  const retry = el('button', 'retry-button', 'Try again') as HTMLButtonElement;
  retry.type = 'button';
  retry.addEventListener('click', onRetry);
  panel.append(retry);
  return panel;
}
