// HTML renderers: pure functions from gateway payloads to markup strings.
//
// Keeping these pure (no DOM access) is what lets the contract tests run
// headlessly in Node against recorded gateway fixtures. main.ts mounts
// the output via innerHTML.

import type { ConsoleStore, TranscriptEntry } from "./store.js";
import type {
  InventorySnapshot,
  ReportResponse,
  RequestOutcome,
} from "./types.js";

export function escapeHtml(raw: string): string {
  return raw
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

function sentinelText(kind: string): string {
  return kind.replaceAll("_", " ");
}

export function renderOutcome(outcome: RequestOutcome): string {
  const parts: string[] = [];
  if (outcome.extraction.kind === "intents") {
    const chips = (outcome.extraction.intents ?? [])
      .map(
        (intent) => `
      <details class="chip">
        <summary>${escapeHtml(intent.intent_type)}</summary>
        <p class="explanation">${escapeHtml(intent.explanation)}</p>
        <p class="confidence">confidence ${intent.confidence.toFixed(2)}</p>
      </details>`,
      )
      .join("");
    parts.push(`<div class="chips">${chips}</div>`);
  } else {
    parts.push(
      `<div class="banner banner-sentinel" data-kind="${outcome.extraction.kind}">` +
        `${escapeHtml(sentinelText(outcome.extraction.kind))}</div>`,
    );
  }
  if (outcome.notices.length) {
    const items = outcome.notices
      .map((notice) => `<li class="notice">${escapeHtml(notice)}</li>`)
      .join("");
    parts.push(`<ul class="notices">${items}</ul>`);
  }
  if (outcome.clarification) {
    parts.push(`
      <form class="clarification" data-request="${escapeHtml(outcome.request_id)}">
        <label>${escapeHtml(outcome.clarification)}</label>
        <input name="answer" type="text" placeholder="answer to continue" />
        <button type="submit">send</button>
      </form>`);
  }
  if (outcome.intent_record_ids.length) {
    const links = outcome.intent_record_ids
      .map((id) => `<a href="#" class="record-link" data-intent="${escapeHtml(id)}">${escapeHtml(id)}</a>`)
      .join(" ");
    parts.push(`<div class="record-ids">records: ${links}</div>`);
  }
  return parts.join("\n");
}

export function renderTranscriptEntry(entry: TranscriptEntry): string {
  return `
  <article class="turn">
    <div class="user-text">${escapeHtml(entry.text)}</div>
    <div class="gateway-response">${renderOutcome(entry.outcome)}</div>
  </article>`;
}

export function renderTranscript(store: ConsoleStore): string {
  const turns = store.transcript.map(renderTranscriptEntry).join("\n");
  const error = store.errorBanner
    ? `<div class="banner banner-error">${escapeHtml(store.errorBanner)}</div>`
    : "";
  return `${error}${turns}`;
}

export function renderInventory(snapshot: InventorySnapshot | null): string {
  if (!snapshot) {
    return `<p class="empty">no inventory yet</p>`;
  }
  const regions = Object.entries(snapshot.region_capacity)
    .map(([region, units]) => `<span class="region">${escapeHtml(region)}: ${units}u</span>`)
    .join(" ");
  const rows = snapshot.networks
    .map(
      (network) => `
    <tr>
      <td>${escapeHtml(network.id)}</td>
      <td>${escapeHtml(network.region)}</td>
      <td class="status status-${escapeHtml(network.status)}">${escapeHtml(network.status)}</td>
      <td>${network.capacity_units}</td>
      <td>${network.registered_users} / ${network.max_users}</td>
      <td>${network.pdu_sessions}</td>
    </tr>`,
    )
    .join("");
  return `
  <div class="region-budgets">${regions}</div>
  <table class="inventory">
    <thead><tr><th>network</th><th>region</th><th>status</th><th>units</th>
      <th>users</th><th>PDU sessions</th></tr></thead>
    <tbody>${rows}</tbody>
  </table>`;
}

export function renderBoard(store: ConsoleStore): string {
  const columns = store
    .board()
    .map(({ column, records }) => {
      const cards = records
        .map(
          (record) => `
      <div class="card" data-intent="${escapeHtml(record.intent.id)}">
        <span class="card-type">${escapeHtml(record.intent.intent_type)}</span>
        <a href="#" class="record-link" data-intent="${escapeHtml(record.intent.id)}">report</a>
      </div>`,
        )
        .join("");
      return `
    <div class="board-column" data-status="${escapeHtml(column)}">
      <h3>${escapeHtml(column)} <span class="count">${records.length}</span></h3>
      ${cards}
    </div>`;
    })
    .join("");
  return `<div class="board">${columns}</div>`;
}

export function renderFeed(store: ConsoleStore): string {
  if (!store.notifications.length) {
    return `<p class="empty">no notifications yet</p>`;
  }
  const items = [...store.notifications]
    .reverse()
    .map(
      (entry) => `
    <li class="feed-entry">
      <time>${escapeHtml(entry.ts)}</time>
      <span class="subject">${escapeHtml(entry.subjectKind)} ${escapeHtml(entry.subjectId)}</span>
      <span class="status">${escapeHtml(entry.status)}</span>
    </li>`,
    )
    .join("");
  return `<ul class="feed">${items}</ul>`;
}

export function renderReport(response: ReportResponse): string {
  const report = response.report;
  const rows = report.achieved_vs_target.length
    ? report.achieved_vs_target
        .map(
          (row) => `
      <tr><td>${escapeHtml(row.metric)}</td>
        <td>${escapeHtml(String(row.achieved))}</td>
        <td>${escapeHtml(String(row.target))}</td></tr>`,
        )
        .join("")
    : `<tr><td colspan="3" class="empty">no targets recorded</td></tr>`;
  const feasibility = report.feasibility
    ? `<p class="verdict verdict-${report.feasibility.verdict}">` +
      `${escapeHtml(report.feasibility.verdict)}: required ${report.feasibility.required_units}, ` +
      `available ${report.feasibility.available_units}<br/>` +
      `<span class="detail">${escapeHtml(report.feasibility.detail)}</span></p>`
    : `<p class="empty">not applicable</p>`;
  const conflicts = report.conflicts.length
    ? `<ul>${report.conflicts
        .map(
          (c) =>
            `<li>with ${escapeHtml(c.intent_id)}: ${escapeHtml(c.reason)}</li>`,
        )
        .join("")}</ul>`
    : `<p class="empty">none</p>`;
  return `
  <div class="report" data-subject="${escapeHtml(report.subject_intent)}">
    <h2>Report for ${escapeHtml(report.subject_intent)}</h2>
    <p class="generated-at">generated ${escapeHtml(report.generated_at)}</p>
    <section class="report-section">
      <h3>Achieved vs. target</h3>
      <table><thead><tr><th>metric</th><th>achieved</th><th>target</th></tr></thead>
        <tbody>${rows}</tbody></table>
    </section>
    <section class="report-section">
      <h3>Feasibility</h3>
      ${feasibility}
    </section>
    <section class="report-section">
      <h3>Conflicts</h3>
      ${conflicts}
    </section>
    <section class="report-section">
      <h3>Fulfillment status</h3>
      <p class="status status-${escapeHtml(report.fulfilment_status)}">${escapeHtml(
        report.fulfilment_status,
      )}</p>
    </section>
  </div>`;
}

export function renderConnection(store: ConsoleStore): string {
  const labels: Record<string, string> = {
    connecting: "connecting…",
    live: "live",
    stale: "stale — reconnecting",
  };
  return `<span class="dot dot-${store.connection}"></span> ${labels[store.connection]}`;
}
