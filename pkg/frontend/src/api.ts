// Thin fetch client over the documented gateway endpoints. Nothing else
// in the console talks HTTP.

import type {
  InventorySnapshot,
  IntentRecord,
  ReportResponse,
  RequestOutcome,
} from "./types.js";

export class GatewayError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<never> {
  let code = "http_error";
  let message = `HTTP ${resp.status}`;
  try {
    const body = (await resp.json()) as { error?: { code: string; message: string } };
    if (body.error) {
      code = body.error.code;
      message = body.error.message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new GatewayError(resp.status, code, message);
}

export class GatewayClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as T;
  }

  createSession(): Promise<{ session_id: string }> {
    return this.post("/v1/sessions", {});
  }

  submitRequest(sessionId: string, text: string): Promise<RequestOutcome> {
    return this.post(`/v1/sessions/${encodeURIComponent(sessionId)}/requests`, { text });
  }

  getIntent(intentId: string): Promise<IntentRecord> {
    return this.get(`/v1/intents/${encodeURIComponent(intentId)}`);
  }

  getReport(intentId: string): Promise<ReportResponse> {
    return this.get(`/v1/intents/${encodeURIComponent(intentId)}/report`);
  }

  getNetworks(): Promise<InventorySnapshot> {
    return this.get("/v1/networks");
  }

  advanceClock(seconds: number): Promise<{ now: string }> {
    return this.post("/v1/clock/advance", { seconds });
  }

  eventsUrl(sessionId: string): string {
    return `${this.baseUrl}/v1/events?session=${encodeURIComponent(sessionId)}`;
  }
}
