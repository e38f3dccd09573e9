/** Thin fetch wrapper over the review service; no retries, no storage. */

import type { ReviewRequestBody, ReviewResponse } from './types.js';

export type SubmitResult =
  | { ok: true; data: ReviewResponse }
  | { ok: false; status: number; payload: unknown };

export const NETWORK_FAILURE = 0;

async function safeJson(response: Response): Promise<unknown> {
  try {
    return await response.json();
  } catch {
    return null;
  }
}

export async function submitReview(
  base: string,
  body: ReviewRequestBody,
  fetchFn: typeof fetch = fetch,
): Promise<SubmitResult> {
  let response: Response;
  try {
    response = await fetchFn(`${base}/review`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  } catch {
    return { ok: false, status: NETWORK_FAILURE, payload: null };
  }
  const payload = await safeJson(response);
  if (response.ok) {
    return { ok: true, data: payload as ReviewResponse };
  }
  return { ok: false, status: response.status, payload };
}

export async function fetchHealth(
  base: string,
  fetchFn: typeof fetch = fetch,
): Promise<{ status: string; prompt_version: string; model_id: string } | null> {
  try {
    const response = await fetchFn(`${base}/health`);
    if (!response.ok) return null;
    return (await response.json()) as {
      status: string;
      prompt_version: string;
      model_id: string;
    };
  } catch {
    return null;
  }
}
