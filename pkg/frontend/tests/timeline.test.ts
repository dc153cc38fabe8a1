import { describe, expect, it } from "vitest";

import { KeyframeTimeline } from "../src/timeline.js";
import type { KeyframeJson } from "../src/types.js";

const keyframe = (frame: number, opacity = 0.8): KeyframeJson => ({
  frames: [frame, frame],
  bbox: [
    [0, 0, 0],
    [16, 16, 8],
  ],
  camera: { pos: [8, 8, 40], dir: [0, 0, -1], up: [0, 1, 0] },
  scene: [
    {
      data: 0,
      tf: {
        domain: [0, 1],
        points: [
          [0, [0, 0, 0], 0],
          [1, [1, 1, 1], opacity],
        ],
      },
      clip: null,
      interp: "linear",
    },
  ],
});

describe("KeyframeTimeline", () => {
  it("sorts anchors on load", () => {
    const timeline = new KeyframeTimeline([keyframe(20), keyframe(0), keyframe(10)]);
    expect(timeline.anchors()).toEqual([0, 10, 20]);
  });

  it("adds a keyframe cloned from the nearest earlier anchor", () => {
    const timeline = new KeyframeTimeline([keyframe(0, 0.2), keyframe(10, 0.9)]);
    const added = timeline.addKeyframe(5);
    expect(added.frames).toEqual([5, 5]);
    expect(added.scene[0].tf.points[1][2]).toBe(0.2); // cloned from frame 0
    expect(timeline.anchors()).toEqual([0, 5, 10]);
  });

  it("refuses frames covered by an existing keyframe", () => {
    const timeline = new KeyframeTimeline([keyframe(0)]);
    expect(() => timeline.addKeyframe(0)).toThrow(/covered/);
  });

  it("removes an anchor but never the last one", () => {
    const timeline = new KeyframeTimeline([keyframe(0), keyframe(10)]);
    timeline.removeKeyframe(10);
    expect(timeline.anchors()).toEqual([0]);
    expect(() => timeline.removeKeyframe(0)).toThrow(/at least one/);
  });

  it("edits do not leak into exported clones", () => {
    const timeline = new KeyframeTimeline([keyframe(0)]);
    const exported = timeline.toKeyframes();
    exported[0].scene[0].tf.points[1][2] = 0.123;
    expect(timeline.keyframes[0].scene[0].tf.points[1][2]).toBe(0.8);
  });

  it("applies a transfer-function draft to one binding", () => {
    const timeline = new KeyframeTimeline([keyframe(0), keyframe(10)]);
    timeline.setTransferFunction(1, 0, {
      domain: [0, 1],
      points: [
        [0, [0, 0, 1], 0.1],
        [1, [1, 0, 0], 0.9],
      ],
    });
    expect(timeline.keyframes[1].scene[0].tf.points[0][1]).toEqual([0, 0, 1]);
    expect(timeline.keyframes[0].scene[0].tf.points[0][1]).toEqual([0, 0, 0]);
  });
});
