// Thin typed client over the session API. The transport is injectable so
// tests can stub the whole server with a scripted response table.

import type {
  CreateSessionPayload,
  HypothesisPayload,
  MapPayload,
  SessionSnapshot,
  TurnPayload,
} from "./types.js";

export interface HttpReply {
  status: number;
  body: unknown;
}

export type Transport = (method: string, path: string, body?: unknown) => Promise<HttpReply>;

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

function errorFrom(reply: HttpReply): ApiError {
  const body = reply.body as { code?: string; message?: string } | null;
  return new ApiError(reply.status, body?.code ?? "error",
    body?.message ?? `request failed with status ${reply.status}`);
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const reply = await this.transport(method, path, body);
    if (reply.status >= 400) throw errorFrom(reply);
    return reply.body as T;
  }

  createSession(): Promise<CreateSessionPayload> {
    return this.request("POST", "/api/sessions", {});
  }

  sendMessage(sessionId: string, text: string): Promise<TurnPayload> {
    return this.request("POST", `/api/sessions/${sessionId}/messages`, { text });
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request("GET", `/api/sessions/${sessionId}`);
  }

  getMap(sessionId: string): Promise<MapPayload> {
    return this.request("GET", `/api/sessions/${sessionId}/map`);
  }

  getHypotheses(sessionId: string): Promise<HypothesisPayload[]> {
    return this.request("GET", `/api/sessions/${sessionId}/hypotheses`);
  }

  exportPath(sessionId: string, format: "json" | "dot" | "markdown"): string {
    return `/api/sessions/${sessionId}/export?format=${format}`;
  }

  async fetchExport(sessionId: string, format: "json" | "dot" | "markdown"): Promise<string> {
    const reply = await this.transport("GET", this.exportPath(sessionId, format));
    if (reply.status >= 400) throw errorFrom(reply);
    return String(reply.body);
  }
}

/** Browser transport over fetch; JSON in, JSON (or raw text) out. */
export function fetchTransport(baseUrl = ""): Transport {
  return async (method, path, body) => {
    const response = await fetch(baseUrl + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await response.text();
    let parsed: unknown = text;
    try {
      parsed = JSON.parse(text);
    } catch {
      // raw exports (dot, markdown) stay as text
    }
    return { status: response.status, body: parsed };
  };
}
