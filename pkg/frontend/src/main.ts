// Browser wiring: composer, panels, SSE subscription. All DOM access
// lives here; everything interesting is in store.ts / render.ts.

import { GatewayClient, GatewayError } from "./api.js";
import {
  renderBoard,
  renderConnection,
  renderFeed,
  renderInventory,
  renderReport,
  renderTranscript,
} from "./render.js";
import { openEventStream } from "./sse.js";
import { ConsoleStore } from "./store.js";

const store = new ConsoleStore();
const client = new GatewayClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function repaintTranscript(): void {
  el("transcript").innerHTML = renderTranscript(store);
  const pane = el("transcript");
  pane.scrollTop = pane.scrollHeight;
}

function repaintPanels(): void {
  el("inventory").innerHTML = renderInventory(store.inventory);
  el("board").innerHTML = renderBoard(store);
  el("feed").innerHTML = renderFeed(store);
  el("connection").innerHTML = renderConnection(store);
}

async function refreshInventory(): Promise<void> {
  store.applyInventory(await client.getNetworks());
}

async function refreshRecords(ids: string[]): Promise<void> {
  for (const id of ids) {
    store.applyRecord(await client.getIntent(id));
  }
}

async function showReport(intentId: string): Promise<void> {
  try {
    el("report").innerHTML = renderReport(await client.getReport(intentId));
  } catch (err) {
    el("report").innerHTML = `<p class="empty">report unavailable: ${String(err)}</p>`;
  }
}

async function submit(text: string): Promise<void> {
  if (!store.sessionId) return;
  const confirmFirst = el<HTMLInputElement>("confirm-mode").checked;
  if (confirmFirst && !window.confirm(`Submit for execution?\n\n${text}`)) {
    return;
  }
  try {
    const outcome = await client.submitRequest(store.sessionId, text);
    store.applyOutcome(text, outcome);
    await refreshRecords(outcome.intent_record_ids);
    await refreshInventory();
  } catch (err) {
    if (err instanceof GatewayError) {
      store.applySubmitError(`${err.code}: ${err.message}`);
    } else {
      store.applySubmitError(`gateway unreachable: ${String(err)}`);
    }
  }
  repaintTranscript();
  repaintPanels();
}

async function start(): Promise<void> {
  const { session_id } = await client.createSession();
  store.sessionId = session_id;
  el("session-id").textContent = session_id;

  openEventStream(
    client.eventsUrl(session_id),
    (event) => {
      store.applyEvent(event);
      if (event.kind === "fulfilment_transition" || event.kind === "network_activated") {
        const intentId = String(event.payload["intent_id"] ?? "");
        if (intentId && store.records.has(intentId)) {
          void client.getIntent(intentId).then((record) => {
            store.applyRecord(record);
            repaintPanels();
          });
        }
        void refreshInventory().then(repaintPanels);
      }
      repaintPanels();
    },
    (state) => {
      store.setConnection(state);
      el("connection").innerHTML = renderConnection(store);
    },
  );

  await refreshInventory();
  repaintPanels();

  const form = el<HTMLFormElement>("composer");
  const input = el<HTMLInputElement>("composer-text");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text) return;
    input.value = "";
    void submit(text);
  });

  // clarification answers and report links are rendered dynamically
  document.addEventListener("submit", (event) => {
    const target = event.target as HTMLElement;
    if (target.matches("form.clarification")) {
      event.preventDefault();
      const answer = (target.querySelector("input[name=answer]") as HTMLInputElement).value;
      if (answer.trim()) void submit(answer.trim());
    }
  });
  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.matches("a.record-link")) {
      event.preventDefault();
      const intentId = target.dataset["intent"];
      if (intentId) void showReport(intentId);
    }
  });
}

void start();
