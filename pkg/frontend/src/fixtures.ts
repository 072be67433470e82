/**
 * Synthetic gesture frames for demos and tests: a filled disk reads as a
 * fist, a bigger disk as an open hand, a disk with two thin strips as
 * scissors. Mirrors the fixtures the backend is verified with.
 */
import type { RawFrame } from './protocol.js';
import type { FrameSource } from './camera.js';

export function solidFrame(
  width: number,
  height: number,
  rgb: [number, number, number] = [0, 0, 0],
): RawFrame {
  const rgba = new Uint8Array(width * height * 4);
  for (let i = 0; i < width * height; i++) {
    rgba[i * 4] = rgb[0];
    rgba[i * 4 + 1] = rgb[1];
    rgba[i * 4 + 2] = rgb[2];
    rgba[i * 4 + 3] = 255;
  }
  return { width, height, rgba };
}

function paintWhite(frame: RawFrame, x: number, y: number): void {
  if (x < 0 || y < 0 || x >= frame.width || y >= frame.height) {
    return;
  }
  const offset = (y * frame.width + x) * 4;
  frame.rgba[offset] = 255;
  frame.rgba[offset + 1] = 255;
  frame.rgba[offset + 2] = 255;
}

export function diskFrame(
  cx: number,
  cy: number,
  r: number,
  width = 320,
  height = 240,
): RawFrame {
  const frame = solidFrame(width, height);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      if ((x - cx) ** 2 + (y - cy) ** 2 <= r * r) {
        paintWhite(frame, x, y);
      }
    }
  }
  return frame;
}

export function vFrame(
  cx: number,
  cy: number,
  r: number,
  stripLen = 45,
  width = 320,
  height = 240,
): RawFrame {
  const frame = diskFrame(cx, cy, r, width, height);
  for (const direction of [-1, 1]) {
    for (let t = 0; t <= stripLen; t++) {
      const x = cx + direction * t;
      const y = cy - Math.floor(1.1 * t);
      for (const ox of [0, 1]) {
        for (const oy of [0, 1]) {
          paintWhite(frame, x + ox, y + oy);
        }
      }
    }
  }
  return frame;
}

/**
 * Mock camera: plays a scripted list of frames. When the script runs out it
 * keeps returning the last frame (a webcam never stops mid-game) unless
 * `endAfterScript` asks for null.
 */
export class ScriptedCamera implements FrameSource {
  private index = 0;

  constructor(
    private readonly frames: RawFrame[],
    private readonly endAfterScript = false,
  ) {}

  push(frame: RawFrame): void {
    this.frames.push(frame);
  }

  async grab(): Promise<RawFrame | null> {
    if (this.frames.length === 0) {
      return null;
    }
    if (this.index >= this.frames.length) {
      return this.endAfterScript ? null : this.frames[this.frames.length - 1];
    }
    const frame = this.frames[this.index];
    this.index += 1;
    return frame;
  }
}
