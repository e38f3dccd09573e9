/** Color-coded 1-5 risk badge. Purely presentational. */

import type { RiskScore } from './types.js';

export type RiskLevel = 'green' | 'amber' | 'red';

export function riskLevel(value: number): RiskLevel {
  if (value <= 2) return 'green';
  if (value === 3) return 'amber';
  return 'red';
}

export function renderRiskBadge(risk: RiskScore): HTMLSpanElement {
  const badge = document.createElement('span');
  badge.className = `risk-badge risk-${riskLevel(risk.value)}`;
  badge.dataset.risk = String(risk.value);
  badge.textContent = `${risk.value} (${risk.label})`;
  badge.setAttribute('role', 'status');
  badge.setAttribute('aria-label', `Ethics risk score ${risk.value}: ${risk.label}`);
  return badge;
}
