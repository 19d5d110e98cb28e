// Thin fetch wrapper over the engine service. No reasoning happens here:
// every method returns the service payload as-is.

import {
  ErrorEnvelope,
  ModelDocument,
  PathsetsPayload,
  PropagationRow,
  ServiceError,
} from "./types.js";

export interface ConsoleApi {
  getModel(): Promise<ModelDocument>;
  putEvidence(
    updates: Record<string, Record<string, number>>,
  ): Promise<{ revision: number }>;
  deleteEvidence(): Promise<{ revision: number }>;
  propagate(threshold?: number): Promise<PropagationRow[]>;
  pathsets(target: string, limit?: number): Promise<PathsetsPayload>;
}

async function unwrap<T>(response: Response): Promise<T> {
  const text = await response.text();
  let body: unknown = null;
  try {
    body = text ? JSON.parse(text) : null;
  } catch {
    body = null;
  }
  if (!response.ok) {
    const envelope: ErrorEnvelope =
      body && typeof body === "object" && "code" in (body as object)
        ? (body as ErrorEnvelope)
        : { code: `HTTP_${response.status}`, message: text || response.statusText };
    throw new ServiceError(response.status, envelope);
  }
  return body as T;
}

export class HttpApi implements ConsoleApi {
  constructor(private base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async getModel(): Promise<ModelDocument> {
    return unwrap(await fetch(this.url("/model")));
  }

  async putEvidence(
    updates: Record<string, Record<string, number>>,
  ): Promise<{ revision: number }> {
    return unwrap(
      await fetch(this.url("/evidence"), {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(updates),
      }),
    );
  }

  async deleteEvidence(): Promise<{ revision: number }> {
    return unwrap(await fetch(this.url("/evidence"), { method: "DELETE" }));
  }

  async propagate(threshold?: number): Promise<PropagationRow[]> {
    return unwrap(
      await fetch(this.url("/propagate"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(threshold === undefined ? {} : { threshold }),
      }),
    );
  }

  async pathsets(target: string, limit?: number): Promise<PathsetsPayload> {
    const body: Record<string, unknown> = { target };
    if (limit !== undefined) body.limit = limit;
    return unwrap(
      await fetch(this.url("/pathsets"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
  }
}
