// SSE subscription with the browser's native auto-reconnect, surfaced as
// connection-state changes so the header can show a stale indicator.

import type { GatewayEvent, GatewayEventKind } from "./types.js";
import type { ConnectionState } from "./store.js";

const EVENT_KINDS: GatewayEventKind[] = [
  "completion",
  "fulfilment_transition",
  "network_activated",
  "notification",
];

export function openEventStream(
  url: string,
  onEvent: (event: GatewayEvent) => void,
  onState: (state: ConnectionState) => void,
): EventSource {
  const source = new EventSource(url);
  onState("connecting");
  source.onopen = () => onState("live");
  source.onerror = () => onState("stale"); // EventSource retries on its own
  for (const kind of EVENT_KINDS) {
    source.addEventListener(kind, (raw) => {
      const message = raw as MessageEvent<string>;
      const body = JSON.parse(message.data) as { ts: string; payload: Record<string, unknown> };
      onEvent({ kind, ts: body.ts, payload: body.payload });
    });
  }
  return source;
}
