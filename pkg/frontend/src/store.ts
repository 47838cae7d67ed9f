// Console state and the apply functions that feed it.
//
// The console performs no interpretation of its own: every label,
// explanation, and status string stored here is copied verbatim from
// gateway payloads. The store only arranges them for display.

import type {
  GatewayEvent,
  IntentRecord,
  InventorySnapshot,
  RequestOutcome,
} from "./types.js";

export interface TranscriptEntry {
  text: string;
  outcome: RequestOutcome;
}

export interface NotificationEntry {
  ts: string;
  subjectKind: string;
  subjectId: string;
  status: string;
}

export type ConnectionState = "connecting" | "live" | "stale";

/** Fixed lifecycle columns; statuses outside them get their own column. */
export const BOARD_COLUMNS = [
  "Pending",
  "InProgress",
  "Fulfilled",
  "Degraded",
  "Failed",
] as const;

export class ConsoleStore {
  sessionId: string | null = null;
  transcript: TranscriptEntry[] = [];
  pendingClarification: string | null = null;
  records = new Map<string, IntentRecord>();
  inventory: InventorySnapshot | null = null;
  notifications: NotificationEntry[] = [];
  connection: ConnectionState = "connecting";
  errorBanner: string | null = null;

  applyOutcome(text: string, outcome: RequestOutcome): void {
    // transcript order matches gateway session history order: append-only
    this.transcript.push({ text, outcome });
    this.pendingClarification = outcome.clarification;
    this.errorBanner = null;
  }

  applySubmitError(message: string): void {
    // gateway unreachable: show the banner, leave the transcript alone
    this.errorBanner = message;
  }

  applyRecord(record: IntentRecord): void {
    this.records.set(record.intent.id, record);
  }

  applyInventory(snapshot: InventorySnapshot): void {
    this.inventory = snapshot;
  }

  setConnection(state: ConnectionState): void {
    this.connection = state;
  }

  applyEvent(event: GatewayEvent): void {
    if (event.kind === "notification") {
      this.notifications.push({
        ts: event.ts,
        subjectKind: String(event.payload["subject_kind"] ?? ""),
        subjectId: String(event.payload["subject_id"] ?? ""),
        status: String(event.payload["status"] ?? ""),
      });
      return;
    }
    if (event.kind === "fulfilment_transition") {
      const intentId = String(event.payload["intent_id"] ?? "");
      const record = this.records.get(intentId);
      if (record) {
        record.fulfilment.status = String(event.payload["to"] ?? record.fulfilment.status);
      }
    }
  }

  /** Records grouped into lifecycle columns, extras appended at the end. */
  board(): Array<{ column: string; records: IntentRecord[] }> {
    const known = new Map<string, IntentRecord[]>(
      BOARD_COLUMNS.map((column) => [column, []]),
    );
    const extras = new Map<string, IntentRecord[]>();
    for (const record of this.records.values()) {
      const status = record.fulfilment.status;
      const bucket = known.get(status) ?? extras.get(status);
      if (bucket) {
        bucket.push(record);
      } else {
        extras.set(status, [record]);
      }
    }
    const out = [...known.entries()].map(([column, records]) => ({ column, records }));
    for (const [column, records] of extras) {
      out.push({ column, records });
    }
    return out;
  }
}
