/**
 * Debug hull overlay: scale the service's hull vertices (frame pixel
 * coordinates, march order) onto an output canvas and draw the closed
 * polyline. Geometry is pure so tests run without a real canvas.
 */

export interface Stroke2D {
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
}

export function scaleHull(
  hull: [number, number][],
  frameWidth: number,
  frameHeight: number,
  canvasWidth: number,
  canvasHeight: number,
): [number, number][] {
  const sx = canvasWidth / frameWidth;
  const sy = canvasHeight / frameHeight;
  return hull.map(([x, y]) => [x * sx, y * sy]);
}

export function drawHullPolyline(
  ctx: Stroke2D,
  hull: [number, number][],
  frameWidth: number,
  frameHeight: number,
  canvasWidth: number,
  canvasHeight: number,
): number {
  const points = scaleHull(hull, frameWidth, frameHeight, canvasWidth, canvasHeight);
  if (points.length < 2) {
    return 0;
  }
  ctx.beginPath();
  const [startX, startY] = points[0];
  ctx.moveTo(startX, startY);
  for (const [x, y] of points.slice(1)) {
    ctx.lineTo(x, y);
  }
  ctx.closePath();
  ctx.stroke();
  return points.length;
}
