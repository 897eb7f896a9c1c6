/** Typed client for the session service: the only network code in the app. */

import type {
  MessageReply,
  ResultsPayload,
  SessionCreated,
  SessionRecord,
  UploadReply,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** Gateway-side failures are worth retrying with the same input. */
  get retriable(): boolean {
    return this.status === 502;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ApiClient {
  createSession(): Promise<SessionCreated>;
  uploadDataset(sessionId: string, name: string, csv: string): Promise<UploadReply>;
  sendMessage(sessionId: string, text: string): Promise<MessageReply>;
  getSession(sessionId: string): Promise<SessionRecord>;
  getResults(sessionId: string): Promise<ResultsPayload>;
}

async function parse<T>(response: Response): Promise<T> {
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON error bodies fall through to the status-only message below
  }
  if (!response.ok) {
    const detail =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `request failed with status ${response.status}`;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export function createApiClient(baseUrl: string, fetchImpl?: FetchLike): ApiClient {
  const base = baseUrl.replace(/\/+$/, "");
  const doFetch: FetchLike = fetchImpl ?? ((input, init) => fetch(input, init));

  async function request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await doFetch(`${base}${path}`, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    return parse<T>(response);
  }

  return {
    createSession: () => request<SessionCreated>("/v1/sessions", { method: "POST" }),

    uploadDataset: (sessionId, name, csv) =>
      request<UploadReply>(
        `/v1/sessions/${encodeURIComponent(sessionId)}/dataset?name=${encodeURIComponent(name)}`,
        { method: "POST", headers: { "Content-Type": "text/csv" }, body: csv },
      ),

    sendMessage: (sessionId, text) =>
      request<MessageReply>(`/v1/sessions/${encodeURIComponent(sessionId)}/messages`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ text }),
      }),

    getSession: (sessionId) =>
      request<SessionRecord>(`/v1/sessions/${encodeURIComponent(sessionId)}`),

    getResults: (sessionId) =>
      request<ResultsPayload>(`/v1/sessions/${encodeURIComponent(sessionId)}/results`),
  };
}
