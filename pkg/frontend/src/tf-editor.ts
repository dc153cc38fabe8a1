/** Editable transfer-function draft.
 *
 * The draft speaks the exact GAD control-point schema so an export is a valid
 * document fragment verbatim.  Edits keep the point list sorted: dragging a
 * point past its neighbor re-sorts, endpoint values stay pinned to the domain
 * bounds, and exact value collisions are nudged apart.  Export is gated on
 * the full set of format invariants.
 */

import type { TfJson, TfPointJson, Vec3 } from "./types.js";

export interface TfPoint {
  value: number;
  color: Vec3;
  opacity: number;
}

const clamp01 = (x: number) => Math.min(1, Math.max(0, x));

export class TransferFunctionDraft {
  points: TfPoint[];

  constructor(
    public domain: [number, number],
    points: TfPoint[],
  ) {
    this.points = [...points].sort((a, b) => a.value - b.value);
  }

  static fromJson(tf: TfJson): TransferFunctionDraft {
    return new TransferFunctionDraft(
      [tf.domain[0], tf.domain[1]],
      tf.points.map(([value, color, opacity]) => ({
        value,
        color: [...color] as Vec3,
        opacity,
      })),
    );
  }

  toJson(): TfJson {
    return {
      domain: [this.domain[0], this.domain[1]],
      points: this.points.map(
        (p) => [p.value, [...p.color] as Vec3, p.opacity] as TfPointJson,
      ),
    };
  }

  private span(): number {
    return this.domain[1] - this.domain[0];
  }

  private nudgeApart(value: number, skip: number): number {
    const eps = this.span() * 1e-9 || 1e-9;
    let v = value;
    while (this.points.some((p, i) => i !== skip && p.value === v)) {
      v += eps;
    }
    return v;
  }

  /** Move a point; value is clamped (endpoints stay pinned to the domain),
   * the list re-sorts, and the point's new index is returned. */
  movePoint(index: number, value: number, opacity?: number): number {
    const point = this.points[index];
    if (!point) throw new Error(`no control point at index ${index}`);
    const [lo, hi] = this.domain;
    const isFirst = index === 0;
    const isLast = index === this.points.length - 1;
    let v: number;
    if (isFirst) {
      v = lo;
    } else if (isLast) {
      v = hi;
    } else {
      v = this.nudgeApart(Math.min(Math.max(value, lo), hi), index);
    }
    point.value = v;
    if (opacity !== undefined) point.opacity = clamp01(opacity);
    this.points.sort((a, b) => a.value - b.value);
    return this.points.indexOf(point);
  }

  setColor(index: number, color: Vec3): void {
    const point = this.points[index];
    if (!point) throw new Error(`no control point at index ${index}`);
    point.color = [clamp01(color[0]), clamp01(color[1]), clamp01(color[2])];
  }

  setOpacity(index: number, opacity: number): void {
    const point = this.points[index];
    if (!point) throw new Error(`no control point at index ${index}`);
    point.opacity = clamp01(opacity);
  }

  addPoint(value: number, color: Vec3, opacity: number): number {
    const [lo, hi] = this.domain;
    const v = this.nudgeApart(Math.min(Math.max(value, lo), hi), -1);
    const point: TfPoint = {
      value: v,
      color: [clamp01(color[0]), clamp01(color[1]), clamp01(color[2])],
      opacity: clamp01(opacity),
    };
    this.points.push(point);
    this.points.sort((a, b) => a.value - b.value);
    return this.points.indexOf(point);
  }

  removePoint(index: number): void {
    if (!this.points[index]) throw new Error(`no control point at index ${index}`);
    this.points.splice(index, 1);
  }

  /** Every format invariant the server will check, reported locally so the
   * Export button can be disabled with a reason. */
  exportProblems(): string[] {
    const problems: string[] = [];
    if (this.points.length < 2) {
      problems.push("a transfer function needs at least 2 control points");
      return problems;
    }
    for (let i = 1; i < this.points.length; i++) {
      if (!(this.points[i].value > this.points[i - 1].value)) {
        problems.push(`points ${i - 1} and ${i} are not strictly ascending`);
      }
    }
    if (this.points[0].value !== this.domain[0]) {
      problems.push("first point must sit at the domain minimum");
    }
    if (this.points[this.points.length - 1].value !== this.domain[1]) {
      problems.push("last point must sit at the domain maximum");
    }
    for (const [i, p] of this.points.entries()) {
      if (p.opacity < 0 || p.opacity > 1) problems.push(`point ${i} opacity outside [0,1]`);
      if (p.color.some((c) => c < 0 || c > 1)) problems.push(`point ${i} color outside [0,1]`);
    }
    return problems;
  }

  canExport(): boolean {
    return this.exportProblems().length === 0;
  }
}
