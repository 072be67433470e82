import { describe, expect, test } from 'vitest';

import { drawHullPolyline, scaleHull, type Stroke2D } from '../src/overlay.js';

class RecordingCtx implements Stroke2D {
  ops: string[] = [];
  points: [number, number][] = [];

  beginPath() {
    this.ops.push('beginPath');
  }
  moveTo(x: number, y: number) {
    this.ops.push('moveTo');
    this.points.push([x, y]);
  }
  lineTo(x: number, y: number) {
    this.ops.push('lineTo');
    this.points.push([x, y]);
  }
  closePath() {
    this.ops.push('closePath');
  }
  stroke() {
    this.ops.push('stroke');
  }
}

describe('scaleHull', () => {
  test('maps frame pixels onto the canvas', () => {
    const scaled = scaleHull(
      [
        [0, 0],
        [320, 240],
        [160, 120],
      ],
      320,
      240,
      640,
      480,
    );
    expect(scaled).toEqual([
      [0, 0],
      [640, 480],
      [320, 240],
    ]);
  });
});

describe('drawHullPolyline', () => {
  test('draws a closed stroke through every vertex', () => {
    const ctx = new RecordingCtx();
    const hull: [number, number][] = [
      [100, 100],
      [100, 20],
      [20, 20],
      [20, 100],
    ];
    const drawn = drawHullPolyline(ctx, hull, 320, 240, 320, 240);
    expect(drawn).toBe(4);
    expect(ctx.points).toEqual(hull);
    expect(ctx.ops[0]).toBe('beginPath');
    expect(ctx.ops).toContain('closePath');
    expect(ctx.ops[ctx.ops.length - 1]).toBe('stroke');
  });

  test('skips degenerate hulls', () => {
    const ctx = new RecordingCtx();
    expect(drawHullPolyline(ctx, [[5, 5]], 320, 240, 320, 240)).toBe(0);
    expect(ctx.ops).toEqual([]);
  });
});
