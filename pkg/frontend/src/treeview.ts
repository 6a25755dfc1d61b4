/** SVG rendering of the process tree. Layout is a classic tidy-ish pass:
 * leaves get unit width, operators the sum of their children, nodes sit
 * centered above their children. Every node carries data-path so the
 * editor can resolve clicks back to a tree position. */

import { NodePath, TreeJson, pathKey } from "./types.js";

const OP_SYMBOL: Record<string, string> = {
  sequence: "→",
  xor: "×",
  and: "∧",
  loop: "↺",
};

const X_STEP = 86;
const Y_STEP = 74;
const RADIUS = 17;

interface Placed {
  node: TreeJson;
  path: NodePath;
  x: number;
  y: number;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function subtreeWidth(node: TreeJson): number {
  if (node.children.length === 0) return 1;
  return node.children.map(subtreeWidth).reduce((a, b) => a + b, 0);
}

function place(node: TreeJson, path: NodePath, x0: number, depth: number,
               out: Placed[], edges: Array<[Placed, Placed]>): Placed {
  const width = subtreeWidth(node);
  const me: Placed = {
    node,
    path,
    x: (x0 + width / 2) * X_STEP,
    y: (depth + 0.5) * Y_STEP,
  };
  out.push(me);
  let childX = x0;
  node.children.forEach((child, i) => {
    const placed = place(child, [...path, i], childX, depth + 1, out, edges);
    edges.push([me, placed]);
    childX += subtreeWidth(child);
  });
  return me;
}

function depthOf(node: TreeJson): number {
  return 1 + Math.max(0, ...node.children.map(depthOf));
}

function nodeMarkup(p: Placed, selected: boolean): string {
  const sel = selected ? " selected" : "";
  const attrs = `data-path="${pathKey(p.path)}"`;
  if (p.node.kind === "activity") {
    const label = escapeXml(p.node.label ?? "");
    const w = Math.max(52, label.length * 7.2 + 14);
    return `<g class="node leaf activity${sel}" ${attrs}>` +
      `<rect x="${p.x - w / 2}" y="${p.y - 14}" width="${w}" height="28" rx="5"/>` +
      `<text x="${p.x}" y="${p.y + 4}">${label}</text></g>`;
  }
  if (p.node.kind === "tau") {
    return `<g class="node leaf tau${sel}" ${attrs}>` +
      `<circle cx="${p.x}" cy="${p.y}" r="${RADIUS - 4}"/>` +
      `<text x="${p.x}" y="${p.y + 4}">τ</text></g>`;
  }
  return `<g class="node operator op-${p.node.kind}${sel}" ${attrs}>` +
    `<circle cx="${p.x}" cy="${p.y}" r="${RADIUS}"/>` +
    `<text x="${p.x}" y="${p.y + 5}">${OP_SYMBOL[p.node.kind]}</text></g>`;
}

export function renderTreeSvg(tree: TreeJson | null,
                              selectedPath: NodePath | null): string {
  if (tree === null) {
    return `<div class="empty-state">No model yet — discover one from selected ` +
      `variants or import a .ptml file.</div>`;
  }
  const placed: Placed[] = [];
  const edges: Array<[Placed, Placed]> = [];
  place(tree, [], 0, 0, placed, edges);
  const width = subtreeWidth(tree) * X_STEP;
  const height = depthOf(tree) * Y_STEP + 10;
  const selectedKey = selectedPath === null ? null : pathKey(selectedPath);

  const edgeMarkup = edges
    .map(([a, b]) => `<line class="edge" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}"/>`)
    .join("");
  const nodesMarkup = placed
    .map((p) => nodeMarkup(p, selectedKey !== null && pathKey(p.path) === selectedKey))
    .join("");
  return `<svg class="tree-svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" xmlns="http://www.w3.org/2000/svg">` +
    edgeMarkup + nodesMarkup + `</svg>`;
}
