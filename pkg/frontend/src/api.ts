/** Typed client for the animation service. All domain results come from the
 * server; this layer only moves JSON. */

import type {
  ChatReplyJson,
  DatasetJson,
  DocumentJson,
  JobJson,
  KeyframeJson,
  SessionStateJson,
  SpecJson,
  SubmitJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "network", String(err));
    }
    if (!response.ok) {
      let code = "error";
      let message = `HTTP ${response.status}`;
      try {
        const tree = (await response.json()) as { code?: string; message?: string };
        code = tree.code ?? code;
        message = tree.message ?? message;
      } catch {
        // non-JSON error body; keep the defaults
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<{ session_id: string }> {
    return this.request("POST", "/v1/chat/sessions");
  }

  sendMessage(sessionId: string, text: string): Promise<ChatReplyJson> {
    return this.request("POST", `/v1/chat/sessions/${sessionId}/messages`, { text });
  }

  getSession(sessionId: string): Promise<SessionStateJson> {
    return this.request("GET", `/v1/chat/sessions/${sessionId}`);
  }

  submitSpec(spec: SpecJson): Promise<SubmitJson> {
    return this.request("POST", "/v1/animations", spec);
  }

  getJob(jobId: string): Promise<JobJson> {
    return this.request("GET", `/v1/animations/${jobId}`);
  }

  getDocument(jobId: string): Promise<DocumentJson> {
    return this.request("GET", `/v1/animations/${jobId}/doc`);
  }

  postDocument(jobId: string, keyframes: KeyframeJson[]): Promise<SubmitJson> {
    return this.request("POST", `/v1/animations/${jobId}/doc`, { keyframes });
  }

  listDatasets(): Promise<DatasetJson[]> {
    return this.request("GET", "/v1/datasets");
  }

  frameUrl(jobId: string, n: number): string {
    return `${this.baseUrl}/v1/animations/${jobId}/frames/${n}`;
  }
}
