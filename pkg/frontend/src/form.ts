/** Single-page consent-gated submission form and result area.
 *
 * The proposal lives only in component state and DOM inputs - nothing is
 * written to local storage or cookies. One submission is in flight at a
 * time; the submit button stays disabled (with its reason shown) until the
 * required fields are filled and the PII confirmation is checked.
 */

import { submitReview, NETWORK_FAILURE, type SubmitResult } from './api.js';
import { canSubmit, disabledReason, initialState, type FormState } from './state.js';
import {
  renderBusyPanel,
  renderMalformedPanel,
  renderNetworkPanel,
  renderRefusalView,
  renderRejectionPanel,
  renderReportView,
} from './render.js';
import type { ProviderErrorPayload, RejectionPayload, ReviewResponse } from './types.js';

export interface AppOptions {
  base?: string;
  fetchFn?: typeof fetch;
}

const FIELD_IDS: Record<string, string> = {
  field_of_research: 'field-of-research',
  country_region: 'country-region',
  proposal_text: 'proposal-text',
  pii_confirmed: 'pii-confirmed',
};

function labelled(
  id: string,
  labelText: string,
  control: HTMLElement,
  required: boolean,
): HTMLElement {
  const wrap = document.createElement('div');
  wrap.className = 'form-row';
  const label = document.createElement('label');
  label.htmlFor = id;
  label.textContent = required ? `${labelText} *` : labelText;
  control.id = id;
  wrap.append(label, control);
  return wrap;
}

export function renderApp(root: HTMLElement, options: AppOptions = {}): void {
  const base = options.base ?? (window as { ETHICALLY_API_BASE?: string }).ETHICALLY_API_BASE
    ?? 'http://127.0.0.1:8000';
  const fetchFn = options.fetchFn ?? fetch;
  const state: FormState = initialState();

  root.innerHTML = '';

  const header = document.createElement('header');
  const title = document.createElement('h1');
  title.textContent = 'EthicAlly';
  const beta = document.createElement('span');
  beta.className = 'beta-tag';
  beta.textContent = 'BETA';
  title.append(' ', beta);
  header.append(title);

  const welcome = document.createElement('p');
  welcome.className = 'welcome';
  welcome.textContent =
    'Welcome! EthicAlly is a research ethics support system for the social ' +
    'sciences and humanities, powered by AI. Enter your research proposal and ' +
    'receive a free structured report outlining potential ethical issues and ' +
    'making suggestions to address them. Please note that EthicAlly cannot ' +
    'review clinical research.';

  const caution = document.createElement('div');
  caution.className = 'caution-banner';
  caution.setAttribute('role', 'note');
  caution.textContent =
    'CAUTION: EthicAlly is a research app and still under development. It can ' +
    'make mistakes. Always seek ethical advice from your institutional ' +
    'research ethics committee or equivalent.';

  const betaNotice = document.createElement('p');
  betaNotice.className = 'beta-notice';
  betaNotice.textContent =
    'EthicAlly is currently in beta testing. We would love your feedback: ' +
    'contact us at contact@ethically.info with your experience, suggestions, ' +
    'or any issues you encounter.';

  const form = document.createElement('form');
  form.noValidate = true;

  const fieldInput = document.createElement('input');
  fieldInput.type = 'text';
  const regionInput = document.createElement('input');
  regionInput.type = 'text';
  const proposalInput = document.createElement('textarea');
  proposalInput.rows = 12;
  proposalInput.placeholder =
    'Please provide a detailed description of your research proposal, ' +
    'including methodology, participant groups, data collection methods, and ' +
    'any ethical considerations you have already identified...';

  const notice = document.createElement('p');
  notice.className = 'data-notice';
  notice.append(
    'Data Processing Notice: Your research proposal will be sent to an AI ' +
    'provider for analysis. Neither this app nor the provider retain your ' +
    'data after generating the review; processing is automated and no humans ' +
    'review your proposal. See the provider’s ',
  );
  const policyLink = document.createElement('a');
  policyLink.href = 'https://www.anthropic.com/legal/privacy';
  policyLink.rel = 'noreferrer';
  policyLink.textContent = 'privacy policy';
  notice.append(policyLink, ' for details.');

  const piiCheckbox = document.createElement('input');
  piiCheckbox.type = 'checkbox';
  const piiRow = document.createElement('div');
  piiRow.className = 'form-row consent-row';
  const piiLabel = document.createElement('label');
  piiLabel.htmlFor = FIELD_IDS.pii_confirmed;
  piiCheckbox.id = FIELD_IDS.pii_confirmed;
  piiLabel.textContent =
    'I understand that my research proposal will be processed by AI systems ' +
    'located outside the EU. I confirm that I have removed any personally ' +
    'identifying information about research participants and other third ' +
    'parties from my proposal. *';
  piiRow.append(piiCheckbox, piiLabel);

  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.id = 'submit-btn';
  submit.textContent = 'Generate Ethics Review';
  submit.disabled = true;

  const reason = document.createElement('p');
  reason.id = 'submit-reason';
  reason.className = 'submit-reason';
  reason.setAttribute('aria-live', 'polite');

  const footnote = document.createElement('p');
  footnote.className = 'busy-footnote';
  footnote.textContent =
    "Note: If you do not receive a response, Claude's servers may be busy - " +
    'please try again in a few minutes.';

  const status = document.createElement('div');
  status.id = 'status-area';
  status.setAttribute('aria-live', 'polite');

  const result = document.createElement('div');
  result.id = 'result-area';

  form.append(
    labelled(FIELD_IDS.field_of_research, 'Field of Research', fieldInput, true),
    labelled(FIELD_IDS.country_region, 'Country/Region', regionInput, true),
    labelled(FIELD_IDS.proposal_text, 'Research Proposal', proposalInput, true),
    notice,
    piiRow,
    submit,
    reason,
    footnote,
  );
  root.append(header, welcome, caution, betaNotice, form, status, result);

  function refreshGate(): void {
    submit.disabled = !canSubmit(state);
    reason.textContent = disabledReason(state) ?? '';
  }

  function syncState(): void {
    state.fieldOfResearch = fieldInput.value;
    state.countryRegion = regionInput.value;
    state.proposalText = proposalInput.value;
    state.piiConfirmed = piiCheckbox.checked;
    refreshGate();
  }

  for (const input of [fieldInput, regionInput, proposalInput]) {
    input.addEventListener('input', syncState);
  }
  piiCheckbox.addEventListener('change', syncState);

  function clearFieldHighlights(): void {
    for (const id of Object.values(FIELD_IDS)) {
      document.getElementById(id)?.classList.remove('field-error');
    }
  }

  function highlightFields(names: string[]): void {
    for (const name of names) {
      const id = FIELD_IDS[name];
      if (id) document.getElementById(id)?.classList.add('field-error');
    }
  }

  function showResult(outcome: SubmitResult): void {
    result.innerHTML = '';
    clearFieldHighlights();
    if (outcome.ok) {
      const data = outcome.data;
      if (data.kind === 'Report' && data.report) {
        result.append(renderReportView(data));
      } else {
        result.append(renderRefusalView(data.raw_text));
      }
      state.status = 'Done';
      return;
    }
    state.status = 'Error';
    if (outcome.status === NETWORK_FAILURE) {
      result.append(renderNetworkPanel(() => void doSubmit()));
    } else if (outcome.status === 400) {
      const { panel, invalidFields } = renderRejectionPanel(
        outcome.payload as RejectionPayload | null,
      );
      result.append(panel);
      highlightFields(invalidFields);
    } else if (outcome.status === 422) {
      result.append(renderMalformedPanel(outcome.payload as Partial<ReviewResponse> | null));
    } else {
      result.append(renderBusyPanel(outcome.payload as ProviderErrorPayload | null));
    }
  }

  async function doSubmit(): Promise<void> {
    if (!canSubmit(state)) return;
    state.status = 'Submitting';
    refreshGate();
    status.textContent =
      'Generating your ethics review - this typically takes 30-60 seconds...';
    const outcome = await submitReview(
      base,
      {
        field_of_research: state.fieldOfResearch,
        country_region: state.countryRegion,
        proposal_text: state.proposalText,
        pii_confirmed: state.piiConfirmed,
      },
      fetchFn,
    );
    status.textContent = '';
    showResult(outcome);
    refreshGate();
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void doSubmit();
  });

  refreshGate();
}
