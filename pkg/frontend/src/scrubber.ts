/** Frame scrubber state: slider position, play/pause wrap-around, and the
 * prefetch window around the cursor. */

export class FramePlayer {
  index = 0;
  playing = false;

  constructor(
    public frameCount: number,
    private onChange?: (index: number) => void,
  ) {}

  setFrameCount(count: number): void {
    this.frameCount = count;
    if (this.index >= count) {
      this.setIndex(count > 0 ? count - 1 : 0);
    }
  }

  setIndex(index: number): void {
    const max = Math.max(0, this.frameCount - 1);
    const next = Math.min(Math.max(0, Math.trunc(index)), max);
    if (next !== this.index) {
      this.index = next;
      this.onChange?.(this.index);
    }
  }

  /** Advance one frame, wrapping from the last frame back to the first. */
  next(): void {
    if (this.frameCount < 1) return;
    this.index = (this.index + 1) % this.frameCount;
    this.onChange?.(this.index);
  }

  prev(): void {
    if (this.frameCount < 1) return;
    this.index = (this.index - 1 + this.frameCount) % this.frameCount;
    this.onChange?.(this.index);
  }

  play(): void {
    this.playing = true;
  }

  pause(): void {
    this.playing = false;
  }

  /** One timer tick: advances only while playing. */
  tick(): void {
    if (this.playing) this.next();
  }

  /** Frames worth fetching ahead of time: up to two on each side, clamped. */
  prefetchIndices(): number[] {
    const out: number[] = [];
    for (let d = -2; d <= 2; d++) {
      if (d === 0) continue;
      const i = this.index + d;
      if (i >= 0 && i < this.frameCount) out.push(i);
    }
    return out;
  }
}
