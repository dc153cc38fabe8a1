/** Session controller: one UI action maps to exactly one service call, and
 * state always reflects the last server response.  A failed call surfaces its
 * error and leaves every other field untouched. */

import { ApiClient, ApiError } from "./api.js";
import type {
  CritiqueJson,
  HistoryEntryJson,
  JobJson,
  ProposalJson,
} from "./types.js";

export interface UiSessionState {
  sessionId: string | null;
  history: HistoryEntryJson[];
  producedAnimations: string[];
  proposal: ProposalJson | null;
  critique: CritiqueJson | null;
  jobId: string | null;
  job: JobJson | null;
  error: string | null;
}

const initialState = (): UiSessionState => ({
  sessionId: null,
  history: [],
  producedAnimations: [],
  proposal: null,
  critique: null,
  jobId: null,
  job: null,
  error: null,
});

export class ChatController {
  state: UiSessionState = initialState();

  constructor(
    private api: ApiClient,
    private onState?: (state: UiSessionState) => void,
  ) {}

  private emit(changes: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...changes };
    this.onState?.(this.state);
  }

  private fail(err: unknown): never {
    const message =
      err instanceof ApiError ? `${err.code} (${err.status}): ${err.message}` : String(err);
    this.emit({ error: message });
    throw err;
  }

  async open(): Promise<string> {
    try {
      const created = await this.api.createSession();
      this.emit({ ...initialState(), sessionId: created.session_id });
      return created.session_id;
    } catch (err) {
      this.fail(err);
    }
  }

  private requireSession(): string {
    if (!this.state.sessionId) throw new Error("no open session");
    return this.state.sessionId;
  }

  /** Free text: ask the planner for a proposal. */
  async send(text: string): Promise<void> {
    const sessionId = this.requireSession();
    try {
      const reply = await this.api.sendMessage(sessionId, text);
      this.emit({
        error: null,
        proposal: reply.proposal ?? this.state.proposal,
        critique: reply.critique,
        jobId: reply.job_id ?? this.state.jobId,
        history: [
          ...this.state.history,
          { role: "user", content: text, attachment_count: 0 },
          { role: "assistant", content: reply.reply, attachment_count: 0 },
        ],
      });
    } catch (err) {
      this.fail(err);
    }
  }

  /** Accept the current proposal (or pending critique) and start the render. */
  async accept(): Promise<string> {
    const sessionId = this.requireSession();
    try {
      const reply = await this.api.sendMessage(sessionId, "accept");
      this.emit({
        error: null,
        proposal: reply.proposal ?? this.state.proposal,
        critique: null,
        jobId: reply.job_id,
        job: null,
        history: [
          ...this.state.history,
          { role: "user", content: "accept", attachment_count: 0 },
          { role: "assistant", content: reply.reply, attachment_count: 0 },
        ],
      });
      if (!reply.job_id) throw new Error("accept returned no job");
      return reply.job_id;
    } catch (err) {
      this.fail(err);
    }
  }

  /** Ask for a critique of the finished job's frames. */
  async evaluate(): Promise<CritiqueJson> {
    const sessionId = this.requireSession();
    try {
      const reply = await this.api.sendMessage(sessionId, "evaluate");
      this.emit({
        error: null,
        critique: reply.critique,
        history: [
          ...this.state.history,
          { role: "user", content: "evaluate", attachment_count: 0 },
          { role: "assistant", content: reply.reply, attachment_count: 0 },
        ],
      });
      if (!reply.critique) throw new Error("evaluate returned no critique");
      return reply.critique;
    } catch (err) {
      this.fail(err);
    }
  }

  /** One poll step (the UI calls this on a 1 Hz timer while a job runs). */
  async pollJob(): Promise<JobJson | null> {
    if (!this.state.jobId) return null;
    try {
      const job = await this.api.getJob(this.state.jobId);
      this.emit({ job, error: null });
      return job;
    } catch (err) {
      this.fail(err);
    }
  }

  /** Rebuild the whole state from GET endpoints; reloading the page and
   * calling this reproduces the state exactly. */
  async refresh(): Promise<void> {
    const sessionId = this.requireSession();
    try {
      const snapshot = await this.api.getSession(sessionId);
      const job = snapshot.job_id ? await this.api.getJob(snapshot.job_id) : null;
      this.emit({
        sessionId: snapshot.session_id,
        history: snapshot.history,
        producedAnimations: snapshot.produced_animations,
        proposal: snapshot.proposal,
        critique: snapshot.critique,
        jobId: snapshot.job_id,
        job,
        error: null,
      });
    } catch (err) {
      this.fail(err);
    }
  }
}
