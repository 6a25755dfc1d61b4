/** Wire types of the session service. */

export type NodeKind = "sequence" | "xor" | "and" | "loop" | "activity" | "tau";

export interface TreeJson {
  kind: NodeKind;
  label?: string;
  children: TreeJson[];
}

export interface VariantRow {
  variant_id: number;
  activities: string[];
  case_count: number;
  share: string;
  added: boolean;
  accepted: boolean | null;
}

export interface ViolationRow {
  path: number[];
  code: string;
  severity: "error" | "warning";
  message: string;
}

export interface TreePayload {
  tree: TreeJson | null;
  violations: ViolationRow[];
  added_variant_ids: number[];
  variants: VariantRow[];
}

export interface ActivityRow {
  activity: string;
  count: number;
  in_model: boolean;
}

export interface ApiError {
  code: string;
  message: string;
}

export type NodePath = number[];

export function nodeAt(tree: TreeJson, path: NodePath): TreeJson | null {
  let node: TreeJson = tree;
  for (const index of path) {
    if (index < 0 || index >= node.children.length) return null;
    node = node.children[index];
  }
  return node;
}

export function isLeaf(node: TreeJson): boolean {
  return node.kind === "activity" || node.kind === "tau";
}

export function pathKey(path: NodePath): string {
  return path.join(".");
}
