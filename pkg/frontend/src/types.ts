// Wire types for the gateway HTTP/SSE API. These mirror the canonical
// JSON encodings exactly; the console never invents fields of its own.

export type OutcomeKind = "intents" | "no_intent_present" | "unknown_intent";

export interface DetectedIntent {
  intent_type: string;
  explanation: string;
  evidence_spans: Array<[number, number]>;
  confidence: number;
}

export interface Extraction {
  kind: OutcomeKind;
  intents?: DetectedIntent[];
}

export interface AssumedDefault {
  name: string;
  value: unknown;
  notice: string;
}

export interface StructuredIntent {
  id: string;
  intent_type: string;
  attributes: Record<string, unknown>;
  source_request_id: string;
  assumed_defaults: AssumedDefault[];
}

export interface RequestOutcome {
  request_id: string;
  extraction: Extraction;
  structured: StructuredIntent[];
  clarification: string | null;
  intent_record_ids: string[];
  notices: string[];
}

export interface FeasibilityResult {
  verdict: "feasible" | "infeasible";
  required_units: number;
  available_units: number;
  detail: string;
}

export interface FulfilmentInfo {
  status: string;
  achieved: Record<string, unknown>;
  targets: Record<string, unknown>;
  conflicts: Array<{ intent_id: string; reason: string }>;
  feasibility: FeasibilityResult | null;
  failure_reason: string | null;
}

export interface IntentRecord {
  intent: StructuredIntent;
  policy: Record<string, unknown>;
  fulfilment: FulfilmentInfo;
  created_at: string;
  updated_at: string;
  session_id: string | null;
  subject_network_id: string | null;
  report: ReportBody | null;
}

export interface ReportRow {
  metric: string;
  achieved: unknown;
  target: unknown;
}

export interface ReportBody {
  subject_intent: string;
  generated_at: string;
  fulfilment_status: string;
  achieved_vs_target: ReportRow[];
  feasibility: FeasibilityResult | null;
  conflicts: Array<{ intent_id: string; reason: string }>;
}

export interface ReportResponse {
  report: ReportBody;
  text: string;
}

export interface NetworkRecord {
  id: string;
  region: string;
  network_type: string;
  plmn_id: string | null;
  capacity_units: number;
  registered_users: number;
  max_users: number;
  pdu_sessions: number;
  status: string;
}

export interface InventorySnapshot {
  region_capacity: Record<string, number>;
  networks: NetworkRecord[];
}

export type GatewayEventKind =
  | "completion"
  | "fulfilment_transition"
  | "network_activated"
  | "notification";

export interface GatewayEvent {
  kind: GatewayEventKind;
  ts: string;
  payload: Record<string, unknown>;
}
