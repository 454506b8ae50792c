/** Typed client for the explanation service. Every non-2xx response is
 * thrown as ApiError carrying the service's {code, message, detail} body. */

import type {
  AskResponse,
  ErrorBody,
  OverlayMod,
  PgDoc,
  SessionView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ErrorBody,
  ) {
    super(body.message);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    if (resp.status === 204) return undefined as T;
    const text = await resp.text();
    const body = text ? JSON.parse(text) : undefined;
    if (!resp.ok) {
      throw new ApiError(resp.status, body as ErrorBody);
    }
    return body as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  async uploadPg(text: string): Promise<string> {
    const out = await this.request<{ id: string }>("/pg", {
      method: "POST",
      body: text,
    });
    return out.id;
  }

  fetchPg(pgId: string): Promise<PgDoc> {
    return this.request(`/pg/${pgId}`);
  }

  async uploadOntology(text: string): Promise<string> {
    const out = await this.request<{ id: string }>("/ontologies", {
      method: "POST",
      body: text,
    });
    return out.id;
  }

  async openSession(pgId: string, ontologyId?: string): Promise<string> {
    const out = await this.request<{ id: string }>("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ pg_id: pgId, ontology_id: ontologyId ?? null }),
    });
    return out.id;
  }

  ask(sessionId: string, text: string): Promise<AskResponse> {
    return this.request(`/sessions/${sessionId}/ask`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request(`/sessions/${sessionId}`);
  }

  async removeOverlay(sessionId: string, index: number): Promise<OverlayMod[]> {
    const out = await this.request<{ overlay: OverlayMod[] }>(
      `/sessions/${sessionId}/overlay/remove`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ index }),
      },
    );
    return out.overlay;
  }

  reset(sessionId: string): Promise<void> {
    return this.request(`/sessions/${sessionId}/reset`, { method: "POST" });
  }
}
