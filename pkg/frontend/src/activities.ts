/** Activity overview: every log activity with a check mark when the
 * current model contains it. */

import { ActivityRow } from "./types.js";

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderActivityOverview(rows: ActivityRow[]): string {
  if (rows.length === 0) {
    return `<div class="empty-state">No event log loaded.</div>`;
  }
  const items = rows.map((row) =>
    `<li class="activity-row${row.in_model ? " in-model" : ""}">` +
    `<span class="presence">${row.in_model ? "✓" : ""}</span>` +
    `<span class="name">${escapeHtml(row.activity)}</span>` +
    `<span class="count">${row.count}</span></li>`).join("");
  return `<ul class="activity-list">${items}</ul>`;
}
