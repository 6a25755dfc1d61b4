/** App wiring. The server owns all state: every mutation posts to the
 * API and the whole view re-renders from the response, so the UI can
 * never drift from the session. One mutating request at a time. */

import { SessionApi, ServiceError } from "./api.js";
import { renderActivityOverview } from "./activities.js";
import { renderVariantExplorer } from "./explorer.js";
import {
  actionEnablement,
  editEnablement,
  renderActionButtons,
  renderEditToolbar,
} from "./toolbar.js";
import { renderTreeSvg } from "./treeview.js";
import { ActivityRow, NodePath, TreePayload, VariantRow, nodeAt } from "./types.js";

interface AppState {
  api: SessionApi | null;
  variants: VariantRow[];
  payload: TreePayload | null;
  activities: ActivityRow[];
  hasLog: boolean;
  selectedVariants: Set<number>;
  selectedNode: NodePath | null;
  pending: boolean;
  toast: string | null;
}

const state: AppState = {
  api: null,
  variants: [],
  payload: null,
  activities: [],
  hasLog: false,
  selectedVariants: new Set(),
  selectedNode: null,
  pending: false,
  toast: null,
};

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function render(): void {
  $("explorer").innerHTML = renderVariantExplorer(state.variants, state.selectedVariants);
  $("tree-panel").innerHTML = renderTreeSvg(state.payload?.tree ?? null, state.selectedNode);
  $("actions").innerHTML = renderActionButtons(
    actionEnablement(state.payload, state.hasLog, state.selectedVariants));
  $("edit-toolbar").innerHTML = renderEditToolbar(
    editEnablement(state.payload?.tree ?? null, state.selectedNode));
  $("activity-overview").innerHTML = renderActivityOverview(state.activities);
  const violations = state.payload?.violations ?? [];
  $("violations").innerHTML = violations.map((v) =>
    `<div class="violation ${v.severity}">${v.code} at [${v.path.join(", ")}]: ${v.message}</div>`,
  ).join("");
  const toast = $("toast");
  toast.textContent = state.toast ?? "";
  toast.className = state.toast ? "toast visible" : "toast";
  document.body.classList.toggle("pending", state.pending);
}

function toast(message: string): void {
  state.toast = message;
  render();
  window.setTimeout(() => {
    state.toast = null;
    render();
  }, 4000);
}

function applyPayload(payload: TreePayload): void {
  state.payload = payload;
  state.variants = payload.variants;
  if (state.selectedNode && payload.tree &&
      nodeAt(payload.tree, state.selectedNode) === null) {
    state.selectedNode = null;
  }
  if (!payload.tree) state.selectedNode = null;
}

async function mutate(run: () => Promise<void>): Promise<void> {
  if (state.pending || !state.api) return;
  state.pending = true;
  render();
  try {
    await run();
    await refreshActivities();
  } catch (error) {
    if (error instanceof ServiceError) {
      toast(`${error.code}: ${error.message}`);
    } else {
      toast(String(error));
    }
  } finally {
    state.pending = false;
    render();
  }
}

async function refreshActivities(): Promise<void> {
  if (!state.api) return;
  state.activities = (await state.api.activities()).activities;
}

function selectedIds(): number[] {
  return [...state.selectedVariants].sort((a, b) => a - b);
}

async function onAction(action: string): Promise<void> {
  const api = state.api!;
  if (action === "discover") {
    await mutate(async () => applyPayload(await api.discover(selectedIds())));
  } else if (action === "extend") {
    await mutate(async () => applyPayload(await api.extend(selectedIds())));
  } else if (action === "conformance") {
    await mutate(async () => {
      const { results } = await api.conformance();
      const flags = new Map(results.map((r) => [r.variant_id, r.accepted]));
      state.variants = state.variants.map((v) => ({
        ...v, accepted: flags.get(v.variant_id) ?? null,
      }));
    });
  } else if (action === "undo" || action === "redo") {
    await mutate(async () => applyPayload(await (action === "undo" ? api.undo() : api.redo())));
  }
}

function promptForNode(): { kind: string; label?: string } | null {
  const kind = window.prompt(
    "New node kind: activity, tau, sequence, xor, and, loop", "activity");
  if (!kind) return null;
  if (kind === "activity") {
    const label = window.prompt("Activity label", "");
    if (!label) return null;
    return { kind, label };
  }
  return { kind };
}

async function onEdit(action: string): Promise<void> {
  const api = state.api!;
  const path = state.selectedNode;
  if (!path) return;
  if (action === "insertLeft" || action === "insertRight" || action === "insertBelow") {
    const node = promptForNode();
    if (!node) return;
    const position = action === "insertLeft" ? "left"
      : action === "insertRight" ? "right" : "below";
    await mutate(async () => applyPayload(await api.edit({ op: "insert", path, position, node })));
  } else if (action === "remove") {
    await mutate(async () => {
      applyPayload(await api.edit({ op: "remove", path }));
      state.selectedNode = null;
    });
  } else if (action === "shiftLeft" || action === "shiftRight") {
    const direction = action === "shiftLeft" ? "left" : "right";
    await mutate(async () => applyPayload(await api.edit({ op: "shift", path, direction })));
  } else if (action === "setLabel") {
    const label = window.prompt("New activity label", "");
    if (!label) return;
    await mutate(async () => applyPayload(await api.edit({ op: "set_label", path, label })));
  }
}

async function onUpload(file: File): Promise<void> {
  await mutate(async () => {
    const api = state.api!;
    const body = await api.uploadLog(await file.arrayBuffer());
    state.hasLog = true;
    state.variants = body.variants;
    state.payload = null;
    state.selectedVariants.clear();
    state.selectedNode = null;
  });
}

async function onImport(file: File): Promise<void> {
  await mutate(async () => {
    applyPayload(await state.api!.importTree(await file.arrayBuffer()));
  });
}

function wire(): void {
  $("explorer").addEventListener("click", (event) => {
    const row = (event.target as HTMLElement).closest<HTMLElement>("[data-variant]");
    if (!row) return;
    const id = Number(row.dataset.variant);
    if (state.selectedVariants.has(id)) {
      state.selectedVariants.delete(id);
    } else {
      state.selectedVariants.add(id);
    }
    render();
  });

  $("tree-panel").addEventListener("click", (event) => {
    const node = (event.target as HTMLElement).closest<HTMLElement>("[data-path]");
    if (!node) return;
    const key = node.dataset.path ?? "";
    state.selectedNode = key === "" ? [] : key.split(".").map(Number);
    render();
  });

  $("actions").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>("[data-action]");
    if (button && !button.disabled) void onAction(button.dataset.action!);
  });

  $("edit-toolbar").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>("[data-edit]");
    if (button && !button.disabled) void onEdit(button.dataset.edit!);
  });

  $("btn-undo").addEventListener("click", () => void onAction("undo"));
  $("btn-redo").addEventListener("click", () => void onAction("redo"));

  ($("log-input") as HTMLInputElement).addEventListener("change", (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) void onUpload(file);
  });
  ($("ptml-input") as HTMLInputElement).addEventListener("change", (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) void onImport(file);
  });

  $("btn-export-ptml").addEventListener("click", () => {
    if (state.api && state.payload?.tree) window.open(state.api.exportUrl("ptml"));
  });
  $("btn-export-pnml").addEventListener("click", () => {
    if (state.api && state.payload?.tree) window.open(state.api.exportUrl("pnml"));
  });
}

async function boot(): Promise<void> {
  wire();
  render();
  try {
    state.api = await SessionApi.create();
  } catch (error) {
    toast(`cannot reach the session service: ${error}`);
    return;
  }
  render();
}

void boot();
