/** Variant explorer: one row per trace variant, activities as colored
 * chevrons, plus the added / accepted status icons. Pure HTML-string
 * renderers so the row logic is testable without a browser. */

import { colorFor } from "./color.js";
import { VariantRow } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function addedIcon(added: boolean): string {
  return added
    ? `<span class="icon added-yes" title="explicitly added to the model">✓</span>`
    : `<span class="icon added-no" title="not added to the model">○</span>`;
}

export function acceptedIcon(accepted: boolean | null): string {
  if (accepted === true) {
    return `<span class="icon accepted-yes" title="accepted by the model">✓</span>`;
  }
  if (accepted === false) {
    return `<span class="icon accepted-no" title="not accepted by the model">✗</span>`;
  }
  return `<span class="icon accepted-unknown" title="run a conformance check">?</span>`;
}

export function chevron(activity: string): string {
  return `<span class="chevron" style="background:${colorFor(activity)}"` +
    ` title="${escapeHtml(activity)}">${escapeHtml(activity)}</span>`;
}

export function renderVariantRow(row: VariantRow, selected: boolean): string {
  const chevrons = row.activities.map(chevron).join("") ||
    `<span class="chevron empty">(empty trace)</span>`;
  const cls = selected ? "variant-row selected" : "variant-row";
  return `<div class="${cls}" data-variant="${row.variant_id}">` +
    `<span class="variant-count">${row.case_count}×</span>` +
    `<span class="variant-share">${row.share}</span>` +
    addedIcon(row.added) +
    acceptedIcon(row.accepted) +
    `<span class="chevrons">${chevrons}</span>` +
    `</div>`;
}

export function renderVariantExplorer(variants: VariantRow[],
                                      selection: ReadonlySet<number>): string {
  if (variants.length === 0) {
    return `<div class="empty-state">Import an event log to see its trace variants.</div>`;
  }
  return variants.map((row) => renderVariantRow(row, selection.has(row.variant_id))).join("");
}
