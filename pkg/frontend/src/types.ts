/** Wire types for the review service JSON API. */

export interface RiskScore {
  value: number;
  label: string;
  justification: string;
}

export interface ComplianceFinding {
  framework: string;
  status: string;
  detail: string;
}

export type IssuePriority = 'High' | 'Moderate' | 'Minor';

export interface EthicalIssue {
  priority: IssuePriority;
  title: string;
  problem: string;
  recommendations: string[];
}

export interface EthicsReport {
  disclaimer: string;
  summary_assessment: string;
  compliance: ComplianceFinding[];
  issues: EthicalIssue[];
  risk: RiskScore;
  supplementary_assessment: string | null;
}

export interface ReviewMeta {
  model_id: string;
  latency_ms: number;
  attempts: number;
  prompt_version: string;
  request_id: string;
}

export interface ReviewResponse {
  kind: 'Report' | 'Refusal' | 'Malformed';
  report: EthicsReport | null;
  raw_text: string;
  warnings: string[];
  failures: string[];
  notices: string[];
  meta: ReviewMeta;
}

export interface ReviewRequestBody {
  field_of_research: string;
  country_region: string;
  proposal_text: string;
  pii_confirmed: boolean;
}

export interface ValidationFailureDto {
  code: string;
  field: string;
  message: string;
}

export interface RejectionPayload {
  error: string;
  failures?: ValidationFailureDto[];
  reasons?: string[];
}

export interface ProviderErrorPayload {
  error: { kind: string; retryable: boolean; detail: string };
  attempts?: number;
  hint?: string | null;
}
