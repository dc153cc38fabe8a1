import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

type Call = { url: string; method: string; body: unknown };

function scriptedFetch(
  routes: Record<string, { status?: number; body: unknown }>,
  calls: Call[] = [],
) {
  return async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    calls.push({
      url,
      method,
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    });
    const route = routes[`${method} ${url}`];
    if (!route) {
      return new Response(JSON.stringify({ code: "not_found", message: url }), {
        status: 404,
      });
    }
    return new Response(JSON.stringify(route.body), { status: route.status ?? 200 });
  };
}

describe("ApiClient", () => {
  it("hits the documented endpoint paths", async () => {
    const calls: Call[] = [];
    const api = new ApiClient(
      "",
      scriptedFetch(
        {
          "POST /v1/chat/sessions": { body: { session_id: "session-0001" } },
          "GET /v1/animations/anim1": { body: { id: "anim1", state: "done" } },
          "POST /v1/animations": {
            status: 202,
            body: { job_id: "anim1", job: { id: "anim1", state: "queued" } },
          },
        },
        calls,
      ),
    );
    await api.createSession();
    await api.getJob("anim1");
    await api.submitSpec({
      dataset: "mini-ocean",
      field: "salinity",
      box: [
        [0, 0, 0],
        [8, 8, 8],
      ],
      time: [0, 3, 1],
      quality: -2,
      streamlines: false,
    });
    expect(calls.map((c) => `${c.method} ${c.url}`)).toEqual([
      "POST /v1/chat/sessions",
      "GET /v1/animations/anim1",
      "POST /v1/animations",
    ]);
    expect((calls[2].body as { field: string }).field).toBe("salinity");
  });

  it("surfaces the server's stable error codes", async () => {
    const api = new ApiClient(
      "",
      scriptedFetch({
        "GET /v1/animations/missing": {
          status: 404,
          body: { code: "unknown_job", message: "missing", http_status: 404 },
        },
      }),
    );
    const err = await api.getJob("missing").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.code).toBe("unknown_job");
  });

  it("maps thrown fetch failures to a network error", async () => {
    const api = new ApiClient("", async () => {
      throw new TypeError("connection refused");
    });
    const err = await api.createSession().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("network");
  });

  it("builds frame urls the image tags can use directly", () => {
    const api = new ApiClient("http://svc");
    expect(api.frameUrl("anim1", 7)).toBe("http://svc/v1/animations/anim1/frames/7");
  });
});
