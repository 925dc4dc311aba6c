// Thin typed client over the HTTP contract. fetch is injectable so
// component tests can run against an in-process contract double.

import type {
  ApplyResponse,
  ChatResponse,
  ErrorBody,
  GraphResponse,
  HistoryResponse,
  SessionInfo,
  StageResponse,
  SuggestionsResponse,
} from "./types";

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly details: Record<string, unknown>;

  constructor(status: number, body: ErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
    this.details = body.details ?? {};
  }
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchFn;

  constructor(base = "", fetchFn: FetchFn = (url, init) => fetch(url, init)) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.base + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let parsed: ErrorBody;
      try {
        parsed = (await response.json()) as ErrorBody;
      } catch {
        parsed = { code: "http_error", message: `HTTP ${response.status}`, details: {} };
      }
      throw new ApiError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<SessionInfo> {
    return this.request("POST", "/sessions");
  }

  chat(token: string, message: string): Promise<ChatResponse> {
    return this.request("POST", `/sessions/${token}/chat`, { message });
  }

  stage(token: string, kind: "include" | "exclude", nodeId: string): Promise<StageResponse> {
    return this.request("POST", `/sessions/${token}/interactions`, {
      kind,
      node_id: nodeId,
    });
  }

  apply(token: string, queryVersion?: number): Promise<ApplyResponse> {
    return this.request("POST", `/sessions/${token}/apply`,
      queryVersion === undefined ? {} : { query_version: queryVersion });
  }

  undo(token: string, actionId: number): Promise<ApplyResponse> {
    return this.request("POST", `/sessions/${token}/undo`, { action_id: actionId });
  }

  async graph(token: string, detail: number): Promise<GraphResponse> {
    const response = await this.fetchFn(
      `${this.base}/sessions/${token}/graph?detail=${detail}`, { method: "GET" });
    if (!response.ok) {
      throw new ApiError(response.status, (await response.json()) as ErrorBody);
    }
    const body = await response.json();
    return {
      subgraph: body.subgraph,
      detail: body.detail,
      clamped: response.headers.get("x-detail-clamped") === "true",
      query_version: body.query_version,
    };
  }

  suggestions(token: string): Promise<SuggestionsResponse> {
    return this.request("GET", `/sessions/${token}/suggested-queries`);
  }

  history(token: string): Promise<HistoryResponse> {
    return this.request("GET", `/sessions/${token}/history`);
  }

  resolveConflict(token: string, pairId: string, winnerRef: string): Promise<unknown> {
    return this.request("POST", `/sessions/${token}/conflicts`, {
      pair_id: pairId,
      winner_ref: winnerRef,
    });
  }

  updates(token: string, since: number, timeoutMs: number): Promise<{ changed: boolean; query_version: number }> {
    return this.request(
      "GET", `/sessions/${token}/updates?since=${since}&timeout_ms=${timeoutMs}`);
  }
}
