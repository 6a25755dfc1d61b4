/** Enablement rules for every toolbar control, as pure functions of the
 * current tree payload and selection. The server re-checks everything; the
 * UI only greys out what is known to fail, exactly per the preconditions
 * of the edit and session operations. */

import { NodePath, TreeJson, TreePayload, isLeaf, nodeAt } from "./types.js";

export interface EditEnablement {
  insertLeft: boolean;
  insertRight: boolean;
  insertBelow: boolean;
  remove: boolean;
  shiftLeft: boolean;
  shiftRight: boolean;
  setLabel: boolean;
}

const NOTHING: EditEnablement = {
  insertLeft: false,
  insertRight: false,
  insertBelow: false,
  remove: false,
  shiftLeft: false,
  shiftRight: false,
  setLabel: false,
};

export function editEnablement(tree: TreeJson | null,
                               selected: NodePath | null): EditEnablement {
  if (tree === null || selected === null) return NOTHING;
  const node = nodeAt(tree, selected);
  if (node === null) return NOTHING;
  const isRoot = selected.length === 0;
  const parent = isRoot ? null : nodeAt(tree, selected.slice(0, -1));
  const index = isRoot ? -1 : selected[selected.length - 1];
  const siblings = parent === null ? 0 : parent.children.length;
  return {
    insertLeft: !isRoot,
    insertRight: !isRoot,
    insertBelow: !isLeaf(node),
    remove: !isRoot,
    shiftLeft: !isRoot && index > 0,
    shiftRight: !isRoot && index < siblings - 1,
    setLabel: node.kind === "activity",
  };
}

export interface ActionEnablement {
  discover: boolean;
  extend: boolean;
  conformance: boolean;
  exportModel: boolean;
}

export function actionEnablement(payload: TreePayload | null, hasLog: boolean,
                                 selectedVariants: ReadonlySet<number>): ActionEnablement {
  const tree = payload?.tree ?? null;
  const hasErrors = (payload?.violations ?? []).some((v) => v.severity === "error");
  return {
    discover: hasLog && selectedVariants.size > 0,
    extend: hasLog && tree !== null && !hasErrors && selectedVariants.size > 0,
    conformance: hasLog && tree !== null && !hasErrors,
    exportModel: tree !== null,
  };
}

/** The three workflow buttons; labels are part of the UI contract. */
export const ACTION_BUTTONS = [
  { id: "btn-discover", action: "discover", label: "discover initial model" },
  { id: "btn-extend", action: "extend", label: "add variant(s) to model" },
  { id: "btn-conformance", action: "conformance", label: "conformance check" },
] as const;

export function renderActionButtons(enablement: ActionEnablement): string {
  const enabled: Record<string, boolean> = {
    discover: enablement.discover,
    extend: enablement.extend,
    conformance: enablement.conformance,
  };
  return ACTION_BUTTONS.map(({ id, action, label }) =>
    `<button id="${id}" data-action="${action}"${enabled[action] ? "" : " disabled"}>` +
    `${label}</button>`).join("");
}

const EDIT_BUTTONS: Array<{ action: keyof EditEnablement; label: string }> = [
  { action: "insertLeft", label: "insert left" },
  { action: "insertRight", label: "insert right" },
  { action: "insertBelow", label: "insert below" },
  { action: "remove", label: "remove" },
  { action: "shiftLeft", label: "shift left" },
  { action: "shiftRight", label: "shift right" },
  { action: "setLabel", label: "rename" },
];

export function renderEditToolbar(enablement: EditEnablement): string {
  return EDIT_BUTTONS.map(({ action, label }) =>
    `<button data-edit="${action}"${enablement[action] ? "" : " disabled"}>${label}</button>`)
    .join("");
}
