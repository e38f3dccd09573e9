/** Canned backend payloads mirroring the service JSON contract. */

import type { ReviewResponse } from '../src/types.js';

export function highRiskReview(): ReviewResponse {
  return {
    kind: 'Report',
    report: {
      disclaimer:
        'DISCLAIMER: This ethics review is generated by an artificial ' +
        'intelligence system for research and educational purposes only. ' +
        'It cannot replace human ethical oversight.',
      summary_assessment:
        'The design contains a fundamental ethical flaw that renders it ' +
        'unacceptable in its current form.',
      compliance: [
        {
          framework: 'NurembergCode',
          status: 'MajorViolation',
          detail: 'Voluntary consent is fundamentally compromised',
        },
        {
          framework: 'BelmontReport',
          status: 'MajorConcern',
          detail: 'Autonomy severely compromised',
        },
      ],
      issues: [
        {
          priority: 'High',
          title: 'Fundamental Conflict of Interest',
          problem: 'The investigator also treats the participants.',
          recommendations: ['Engage an independent researcher'],
        },
        {
          priority: 'High',
          title: 'Coercive Recruitment Environment',
          problem: 'Patients face implicit pressure to participate.',
          recommendations: ['Recruit through independent research staff'],
        },
        {
          priority: 'High',
          title: 'Vulnerable Population Considerations',
          problem: 'Hospitalized patients are inherently vulnerable.',
          recommendations: ['Add capacity assessment on the day of consent'],
        },
        {
          priority: 'Moderate',
          title: 'Timing and Capacity Issues',
          problem: 'Interviews happen during the hospital stay.',
          recommendations: ['Allow rescheduling'],
        },
        {
          priority: 'Minor',
          title: 'Follow-up Interview Ethics',
          problem: '',
          recommendations: ['Re-confirm consent for the follow-up'],
        },
      ],
      risk: {
        value: 5,
        label: 'High Risk',
        justification: 'The dual role makes voluntary participation impossible.',
      },
      supplementary_assessment: null,
    },
    raw_text: 'full transcript omitted in fixture',
    warnings: [],
    failures: [],
    notices: [],
    meta: {
      model_id: 'mock-model',
      latency_ms: 0,
      attempts: 1,
      prompt_version: 'condensed-v1',
      request_id: 'fixture-1',
    },
  };
}

export function refusalReview(): ReviewResponse {
  return {
    kind: 'Refusal',
    report: null,
    raw_text:
      'I must politely decline this review: the proposal describes clinical ' +
      'research, which falls outside the scope of this service.',
    warnings: [],
    failures: [],
    notices: [],
    meta: {
      model_id: 'mock-model',
      latency_ms: 0,
      attempts: 1,
      prompt_version: 'condensed-v1',
      request_id: 'fixture-2',
    },
  };
}

export function jsonResponse(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}
