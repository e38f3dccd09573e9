import { describe, expect, it, vi } from 'vitest';

import { NETWORK_FAILURE, fetchHealth, submitReview } from '../src/api.js';
import { highRiskReview, jsonResponse } from './fixtures.js';

const BODY = {
  field_of_research: 'Sociology',
  country_region: 'Austria',
  proposal_text: 'A survey of allotment gardeners.',
  pii_confirmed: true,
};

describe('submitReview', () => {
  it('posts JSON to /review and returns the parsed payload on 200', async () => {
    const fetchFn = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
      expect(String(url)).toBe('http://b.test/review');
      expect(init?.method).toBe('POST');
      expect(JSON.parse(String(init?.body))).toEqual(BODY);
      return jsonResponse(200, highRiskReview());
    });
    const result = await submitReview('http://b.test', BODY, fetchFn as unknown as typeof fetch);
    expect(result.ok).toBe(true);
    if (result.ok) expect(result.data.kind).toBe('Report');
  });

  it('surfaces non-2xx statuses with their payloads', async () => {
    const fetchFn = vi.fn(async () => jsonResponse(502, { error: { kind: 'Timeout' } }));
    const result = await submitReview('http://b.test', BODY, fetchFn as unknown as typeof fetch);
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(502);
      expect((result.payload as { error: { kind: string } }).error.kind).toBe('Timeout');
    }
  });

  it('maps thrown fetch errors to the network-failure status', async () => {
    const fetchFn = vi.fn(async () => {
      throw new TypeError('offline');
    });
    const result = await submitReview('http://b.test', BODY, fetchFn as unknown as typeof fetch);
    expect(result.ok).toBe(false);
    if (!result.ok) expect(result.status).toBe(NETWORK_FAILURE);
  });
});

describe('fetchHealth', () => {
  it('returns the health document on 200', async () => {
    const fetchFn = vi.fn(async (url: RequestInfo | URL) => {
      expect(String(url)).toBe('http://b.test/health');
      return jsonResponse(200, {
        status: 'ok',
        prompt_version: 'condensed-v1',
        model_id: 'mock-model',
      });
    });
    const health = await fetchHealth('http://b.test', fetchFn as unknown as typeof fetch);
    expect(health?.prompt_version).toBe('condensed-v1');
  });

  it('returns null when the service is unreachable', async () => {
    const fetchFn = vi.fn(async () => {
      throw new TypeError('offline');
    });
    expect(await fetchHealth('http://b.test', fetchFn as unknown as typeof fetch)).toBeNull();
  });
});
