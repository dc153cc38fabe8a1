/** Browser entry point: wires the controllers to the DOM.
 *
 * Layout: chat panel on the left (messages, proposal card, critique card),
 * frame viewer on the right (scrubber, play/pause), transfer-function editor
 * and keyframe timeline below.  Job progress polls at 1 Hz.
 */

import { ApiClient, ApiError } from "./api.js";
import { ChatController } from "./chat.js";
import { FramePlayer } from "./scrubber.js";
import { KeyframeTimeline } from "./timeline.js";
import { TransferFunctionDraft } from "./tf-editor.js";
import type { UiSessionState } from "./chat.js";

const api = new ApiClient("");
const player = new FramePlayer(0, renderFrame);
let timeline: KeyframeTimeline | null = null;
let draft: TransferFunctionDraft | null = null;
let editedKeyframe = 0;

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

function toast(message: string): void {
  const box = el<HTMLDivElement>("toast");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 4000);
}

function renderState(state: UiSessionState): void {
  const log = el<HTMLDivElement>("messages");
  log.innerHTML = "";
  for (const entry of state.history) {
    if (entry.role === "system" || entry.role === "tool") continue;
    const div = document.createElement("div");
    div.className = `message ${entry.role}`;
    div.textContent = entry.content + (entry.attachment_count ? ` [${entry.attachment_count} frames]` : "");
    log.appendChild(div);
  }
  log.scrollTop = log.scrollHeight;

  const card = el<HTMLDivElement>("proposal");
  if (state.proposal) {
    const s = state.proposal.spec;
    card.innerHTML = `
      <h3>Proposal ${state.proposal.clamped ? '<span class="flag">clamped</span>' : ""}</h3>
      <table>
        <tr><td>field</td><td>${s.field}</td></tr>
        <tr><td>box</td><td>${JSON.stringify(s.box)}</td></tr>
        <tr><td>time</td><td>${JSON.stringify(s.time)}</td></tr>
        <tr><td>quality</td><td>${s.quality}</td></tr>
        <tr><td>streamlines</td><td>${s.streamlines}</td></tr>
      </table>
      ${state.proposal.adjustments.map((a) => `<div class="flag">${a}</div>`).join("")}
    `;
    el<HTMLButtonElement>("accept").disabled = false;
  } else {
    card.innerHTML = "<h3>Proposal</h3><p>none yet</p>";
    el<HTMLButtonElement>("accept").disabled = true;
  }

  const critique = el<HTMLDivElement>("critique");
  if (state.critique) {
    critique.innerHTML = `
      <h3>Critique</h3>
      <p>${state.critique.commentary}</p>
      <pre>${JSON.stringify(state.critique.deltas, null, 1)}</pre>
    `;
  } else {
    critique.innerHTML = "";
  }

  const progress = el<HTMLProgressElement>("job-progress");
  const label = el<HTMLSpanElement>("job-label");
  if (state.job) {
    progress.value = state.job.progress;
    label.textContent = `${state.job.id}: ${state.job.state}` + (state.job.error ? ` (${state.job.error})` : "");
    if (state.job.state === "done" && state.job.frame_count !== player.frameCount) {
      player.setFrameCount(state.job.frame_count);
      player.setIndex(0);
      renderFrame(0);
      void loadDocument();
    }
  } else {
    progress.value = 0;
    label.textContent = state.jobId ?? "no job";
  }

  if (state.error) toast(state.error);
}

const chat = new ChatController(api, renderState);

function currentJobId(): string | null {
  return chat.state.jobId;
}

function renderFrame(index: number): void {
  const jobId = currentJobId();
  const img = el<HTMLImageElement>("frame");
  if (!jobId || player.frameCount === 0) {
    img.removeAttribute("src");
    return;
  }
  img.src = api.frameUrl(jobId, index);
  img.onerror = () => {
    img.src =
      "data:image/svg+xml," +
      encodeURIComponent('<svg xmlns="http://www.w3.org/2000/svg" width="256" height="256"><rect width="100%" height="100%" fill="#333"/><text x="50%" y="50%" fill="#bbb" text-anchor="middle">frame missing</text></svg>');
  };
  el<HTMLInputElement>("slider").value = String(index);
  el<HTMLSpanElement>("frame-label").textContent = `${index} / ${Math.max(0, player.frameCount - 1)}`;
  for (const i of player.prefetchIndices()) {
    new Image().src = api.frameUrl(jobId, i);
  }
}

async function loadDocument(): Promise<void> {
  const jobId = currentJobId();
  if (!jobId) return;
  try {
    const doc = await api.getDocument(jobId);
    timeline = new KeyframeTimeline(doc.keyframes);
    editedKeyframe = 0;
    draft = TransferFunctionDraft.fromJson(doc.keyframes[0].scene[0].tf);
    renderEditor();
  } catch (err) {
    toast(String(err));
  }
}

function renderEditor(): void {
  const table = el<HTMLTableElement>("tf-points");
  table.innerHTML = "<tr><th>value</th><th>opacity</th><th>r</th><th>g</th><th>b</th><th></th></tr>";
  if (!draft) return;
  draft.points.forEach((p, i) => {
    const row = table.insertRow();
    const value = row.insertCell();
    const valueInput = document.createElement("input");
    valueInput.type = "number";
    valueInput.step = "any";
    valueInput.value = String(p.value);
    valueInput.onchange = () => {
      if (!draft) return;
      draft.movePoint(i, Number(valueInput.value));
      renderEditor();
    };
    value.appendChild(valueInput);
    const opacity = row.insertCell();
    const opacityInput = document.createElement("input");
    opacityInput.type = "number";
    opacityInput.min = "0";
    opacityInput.max = "1";
    opacityInput.step = "0.05";
    opacityInput.value = String(p.opacity);
    opacityInput.onchange = () => {
      if (!draft) return;
      draft.setOpacity(i, Number(opacityInput.value));
      renderEditor();
    };
    opacity.appendChild(opacityInput);
    p.color.forEach((c, channel) => {
      const cell = row.insertCell();
      const input = document.createElement("input");
      input.type = "number";
      input.min = "0";
      input.max = "1";
      input.step = "0.05";
      input.value = String(c);
      input.onchange = () => {
        if (!draft) return;
        const rgb = [...draft.points[i].color] as [number, number, number];
        rgb[channel] = Number(input.value);
        draft.setColor(i, rgb);
      };
      cell.appendChild(input);
    });
    const remove = row.insertCell();
    const btn = document.createElement("button");
    btn.textContent = "x";
    btn.onclick = () => {
      if (!draft) return;
      draft.removePoint(i);
      renderEditor();
    };
    remove.appendChild(btn);
  });

  const problems = draft.exportProblems();
  el<HTMLDivElement>("tf-problems").innerHTML = problems
    .map((p) => `<div class="flag">${p}</div>`)
    .join("");
  el<HTMLButtonElement>("export").disabled = problems.length > 0;

  const anchors = el<HTMLDivElement>("timeline");
  anchors.innerHTML = "";
  timeline?.anchors().forEach((frame, i) => {
    const chip = document.createElement("button");
    chip.className = "chip" + (i === editedKeyframe ? " active" : "");
    chip.textContent = String(frame);
    chip.onclick = () => {
      editedKeyframe = i;
      if (timeline) draft = TransferFunctionDraft.fromJson(timeline.keyframes[i].scene[0].tf);
      renderEditor();
    };
    anchors.appendChild(chip);
  });
}

async function exportDocument(): Promise<void> {
  const jobId = currentJobId();
  if (!jobId || !timeline || !draft) return;
  timeline.setTransferFunction(editedKeyframe, 0, draft.toJson());
  try {
    const result = await api.postDocument(jobId, timeline.toKeyframes());
    toast(`render job ${result.job_id}: ${result.job.state}`);
    chat.state.jobId = result.job_id;
    void pollUntilDone();
  } catch (err) {
    if (err instanceof ApiError) toast(`${err.code}: ${err.message}`);
    else toast(String(err));
  }
}

let pollTimer: ReturnType<typeof setInterval> | null = null;

function pollUntilDone(): void {
  if (pollTimer) clearInterval(pollTimer);
  pollTimer = setInterval(async () => {
    const job = await chat.pollJob().catch(() => null);
    if (job && (job.state === "done" || job.state === "failed")) {
      if (pollTimer) clearInterval(pollTimer);
      pollTimer = null;
    }
  }, 1000);
}

function wire(): void {
  el<HTMLFormElement>("composer").onsubmit = (event) => {
    event.preventDefault();
    const input = el<HTMLInputElement>("prompt");
    const text = input.value.trim();
    if (!text) return;
    input.value = "";
    void chat.send(text).catch(() => undefined);
  };
  el<HTMLButtonElement>("accept").onclick = () => {
    void chat
      .accept()
      .then(() => pollUntilDone())
      .catch(() => undefined);
  };
  el<HTMLButtonElement>("evaluate").onclick = () => {
    void chat.evaluate().catch(() => undefined);
  };
  el<HTMLInputElement>("slider").oninput = (event) => {
    player.setIndex(Number((event.target as HTMLInputElement).value));
  };
  el<HTMLButtonElement>("play").onclick = () => {
    if (player.playing) {
      player.pause();
      el<HTMLButtonElement>("play").textContent = "play";
    } else {
      player.play();
      el<HTMLButtonElement>("play").textContent = "pause";
    }
  };
  setInterval(() => {
    player.tick();
    el<HTMLInputElement>("slider").max = String(Math.max(0, player.frameCount - 1));
  }, 1000 / 8); // fixed 8 fps playback
  el<HTMLButtonElement>("export").onclick = () => void exportDocument();

  void chat.open().catch((err) => toast(String(err)));
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wire);
}
