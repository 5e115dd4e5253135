/** Thin typed client for the supervision HTTP API. */

import type {
  ConfirmResponse,
  CreateSessionRequest,
  DecideResponse,
  EdgeId,
  FlagResponse,
  FullView,
  PartialView,
  ProposeResponse,
  RiskyResponse,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorName: string,
    readonly detail: string,
  ) {
    super(`${errorName}: ${detail}`);
    this.name = "ApiError";
  }
}

type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    // bind lazily so the global fetch keeps its expected receiver
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    if (!res.ok) {
      let name = `HTTP ${res.status}`;
      let detail = res.statusText;
      try {
        const data = (await res.json()) as Record<string, unknown>;
        if (typeof data.error === "string") name = data.error;
        if (typeof data.detail === "string") detail = data.detail;
        else if (data.detail !== undefined) detail = JSON.stringify(data.detail);
      } catch {
        // non-JSON error body, keep the status text
      }
      throw new ApiError(res.status, name, detail);
    }
    return (await res.json()) as T;
  }

  branches(): Promise<string[]> {
    return this.request("GET", "/branches");
  }

  inspect(branch: string): Promise<FullView> {
    return this.request("GET", `/inspect/${encodeURIComponent(branch)}`);
  }

  sessions(): Promise<SessionSummary[]> {
    return this.request("GET", "/sessions");
  }

  createSession(req: CreateSessionRequest): Promise<SessionSummary> {
    return this.request("POST", "/sessions", req);
  }

  view(sid: string, incoming = false): Promise<PartialView> {
    const query = incoming ? "?incoming=true" : "";
    return this.request("GET", `/sessions/${encodeURIComponent(sid)}/view${query}`);
  }

  propose(sid: string, edge: EdgeId, actor: string): Promise<ProposeResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sid)}/propose`, {
      edge,
      actor,
    });
  }

  decide(
    sid: string,
    proposal: string,
    verdict: "approved" | "vetoed",
    actor: string,
  ): Promise<DecideResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sid)}/decide`, {
      proposal,
      verdict,
      actor,
    });
  }

  setRisky(
    sid: string,
    edge: EdgeId,
    on: boolean,
    actor: string,
  ): Promise<RiskyResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sid)}/risky`, {
      edge,
      on,
      actor,
    });
  }

  setFlag(
    sid: string,
    name: string,
    value: boolean,
    actor: string,
  ): Promise<FlagResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sid)}/flags`, {
      name,
      value,
      actor,
    });
  }

  confirm(sid: string, token: string, actor: string): Promise<ConfirmResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sid)}/confirm`, {
      token,
      actor,
    });
  }
}
