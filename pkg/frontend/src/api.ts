/** Thin fetch client for the session service. Every call resolves to the
 * parsed JSON payload or rejects with the server's error envelope. */

import { ActivityRow, ApiError, NodePath, TreePayload, VariantRow } from "./types.js";

export class ServiceError extends Error {
  constructor(public code: string, message: string) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  let body: unknown = null;
  const text = await response.text();
  if (text) {
    try {
      body = JSON.parse(text);
    } catch {
      body = null;
    }
  }
  if (!response.ok) {
    const err = (body as { error?: ApiError } | null)?.error;
    throw new ServiceError(err?.code ?? `http_${response.status}`,
                           err?.message ?? response.statusText);
  }
  return body as T;
}

export class SessionApi {
  constructor(private base: string, public sessionId: string) {}

  static async create(base = ""): Promise<SessionApi> {
    const body = await unwrap<{ session_id: string }>(
      await fetch(`${base}/sessions`, { method: "POST" }));
    return new SessionApi(base, body.session_id);
  }

  private url(suffix: string): string {
    return `${this.base}/sessions/${this.sessionId}${suffix}`;
  }

  private async post<T>(suffix: string, payload?: unknown): Promise<T> {
    return unwrap<T>(await fetch(this.url(suffix), {
      method: "POST",
      headers: payload === undefined ? {} : { "Content-Type": "application/json" },
      body: payload === undefined ? null : JSON.stringify(payload),
    }));
  }

  async uploadLog(data: ArrayBuffer | Blob) {
    return unwrap<{ variants: VariantRow[]; trace_count: number; variant_count: number }>(
      await fetch(this.url("/log"), { method: "POST", body: data }));
  }

  variants(): Promise<{ variants: VariantRow[] }> {
    return fetch(this.url("/variants")).then((r) => unwrap(r));
  }

  activities(): Promise<{ activities: ActivityRow[] }> {
    return fetch(this.url("/activities")).then((r) => unwrap(r));
  }

  discover(variantIds: number[]): Promise<TreePayload> {
    return this.post("/discover", { variant_ids: variantIds });
  }

  extend(variantIds: number[]): Promise<TreePayload> {
    return this.post("/extend", { variant_ids: variantIds });
  }

  edit(body: { op: string; path: NodePath } & Record<string, unknown>): Promise<TreePayload> {
    return this.post("/tree/edit", body);
  }

  conformance(): Promise<{ results: Array<{ variant_id: number; accepted: boolean | null }> }> {
    return this.post("/conformance");
  }

  undo(): Promise<TreePayload> {
    return this.post("/undo");
  }

  redo(): Promise<TreePayload> {
    return this.post("/redo");
  }

  async importTree(data: ArrayBuffer | Blob): Promise<TreePayload> {
    return unwrap<TreePayload>(
      await fetch(this.url("/tree/import"), { method: "POST", body: data }));
  }

  exportUrl(format: "ptml" | "pnml"): string {
    return this.url(`/export?format=${format}`);
  }
}
