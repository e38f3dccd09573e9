/** Form state and the submit-gating invariant. */

export type FormStatus = 'Idle' | 'Submitting' | 'Done' | 'Error';

export interface FormState {
  fieldOfResearch: string;
  countryRegion: string;
  proposalText: string;
  piiConfirmed: boolean;
  status: FormStatus;
}

export function initialState(): FormState {
  return {
    fieldOfResearch: '',
    countryRegion: '',
    proposalText: '',
    piiConfirmed: false,
    status: 'Idle',
  };
}

/**
 * Submission is available only when every required field is non-empty after
 * trimming, the PII-removal confirmation is checked, and no request is
 * already in flight.
 */
export function canSubmit(s: FormState): boolean {
  return disabledReason(s) === null;
}

/** Why submit is unavailable, or null when it is available. */
export function disabledReason(s: FormState): string | null {
  if (s.status === 'Submitting') return 'A review is already being generated.';
  const missing: string[] = [];
  if (!s.fieldOfResearch.trim()) missing.push('field of research');
  if (!s.countryRegion.trim()) missing.push('country/region');
  if (!s.proposalText.trim()) missing.push('research proposal');
  if (missing.length > 0) return `Please fill in: ${missing.join(', ')}.`;
  if (!s.piiConfirmed) {
    return 'Please confirm that personally identifying information has been removed.';
  }
  return null;
}
