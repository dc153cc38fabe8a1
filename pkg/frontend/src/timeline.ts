/** Keyframe timeline: the editable list of keyframes of a loaded document.
 * Entries stay sorted and non-overlapping; edits produce keyframe trees in
 * the GAD schema for export. */

import type { KeyframeJson, TfJson } from "./types.js";

export class KeyframeTimeline {
  keyframes: KeyframeJson[];

  constructor(keyframes: KeyframeJson[]) {
    this.keyframes = keyframes
      .map((kf) => structuredClone(kf))
      .sort((a, b) => a.frames[0] - b.frames[0]);
  }

  anchors(): number[] {
    return this.keyframes.map((kf) => kf.frames[0]);
  }

  private covering(frame: number): KeyframeJson | undefined {
    return this.keyframes.find((kf) => kf.frames[0] <= frame && frame <= kf.frames[1]);
  }

  /** Insert a single-frame keyframe cloned from the nearest earlier (or first)
   * keyframe. Refuses frames inside an existing keyframe's range. */
  addKeyframe(frame: number): KeyframeJson {
    if (frame < 0 || !Number.isInteger(frame)) {
      throw new Error(`frame must be a non-negative integer, got ${frame}`);
    }
    if (this.covering(frame)) {
      throw new Error(`frame ${frame} is already covered by a keyframe`);
    }
    const before = [...this.keyframes].reverse().find((kf) => kf.frames[1] < frame);
    const template = before ?? this.keyframes[0];
    if (!template) throw new Error("cannot add to an empty timeline");
    const clone = structuredClone(template);
    clone.frames = [frame, frame];
    delete clone.cameras;
    this.keyframes.push(clone);
    this.keyframes.sort((a, b) => a.frames[0] - b.frames[0]);
    return clone;
  }

  removeKeyframe(frame: number): void {
    const index = this.keyframes.findIndex((kf) => kf.frames[0] === frame);
    if (index < 0) throw new Error(`no keyframe anchored at frame ${frame}`);
    if (this.keyframes.length === 1) {
      throw new Error("a document needs at least one keyframe");
    }
    this.keyframes.splice(index, 1);
  }

  setTransferFunction(keyframeIndex: number, sceneIndex: number, tf: TfJson): void {
    const kf = this.keyframes[keyframeIndex];
    if (!kf || !kf.scene[sceneIndex]) {
      throw new Error(`no scene binding at keyframe ${keyframeIndex}, slot ${sceneIndex}`);
    }
    kf.scene[sceneIndex].tf = structuredClone(tf);
  }

  /** Keyframe trees ready for POST /v1/animations/{id}/doc. */
  toKeyframes(): KeyframeJson[] {
    return this.keyframes.map((kf) => structuredClone(kf));
  }
}
