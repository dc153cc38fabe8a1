/** Wire types mirroring the animation service's JSON bodies. */

export type Vec3 = [number, number, number];
export type Box = [Vec3, Vec3];

export interface SpecJson {
  dataset: string;
  field: string;
  box: Box;
  time: [number, number, number];
  quality: number;
  streamlines: boolean;
}

export interface JobJson {
  id: string;
  state: "queued" | "fetching" | "rendering" | "done" | "failed";
  progress: number;
  frame_count: number;
  error: string | null;
  fetched_timesteps: number;
  total_timesteps: number;
  frames_written: number;
}

export interface SubmitJson {
  job_id: string;
  job: JobJson;
}

export interface ProposalJson {
  spec: SpecJson;
  rationale: string;
  confidence: number;
  clamped: boolean;
  adjustments: string[];
}

export interface CritiqueJson {
  deltas: Record<string, unknown>;
  commentary: string;
}

export interface ChatReplyJson {
  reply: string;
  proposal: ProposalJson | null;
  critique: CritiqueJson | null;
  job_id: string | null;
}

export interface HistoryEntryJson {
  role: string;
  content: string;
  attachment_count: number;
}

export interface SessionStateJson {
  session_id: string;
  dataset: string;
  history: HistoryEntryJson[];
  produced_animations: string[];
  proposal: ProposalJson | null;
  critique: CritiqueJson | null;
  job_id: string | null;
}

/** [scalar value, [r, g, b], opacity] exactly as stored in GAD files. */
export type TfPointJson = [number, Vec3, number];

export interface TfJson {
  domain: [number, number];
  points: TfPointJson[];
}

export interface SceneBindingJson {
  data: number;
  tf: TfJson;
  clip: Box | null;
  interp: string;
  streamline?: { seed_density: number; step_size: number; max_steps: number };
}

export interface CameraJson {
  pos: Vec3;
  dir: Vec3;
  up: Vec3;
}

export interface KeyframeJson {
  frames: [number, number];
  bbox: [Vec3, Vec3];
  camera: CameraJson;
  scene: SceneBindingJson[];
  cameras?: CameraJson[];
}

export interface DocumentJson {
  header: { version: string; data_list: string; keyframes: string[] };
  datalist: unknown[];
  keyframes: KeyframeJson[];
}

export interface DatasetJson {
  name: string;
  fields: { name: string; channels: number; range: [number, number] }[];
  dims: Vec3;
  timesteps: number;
  stride_hours: number;
}
