/**
 * Frame sources. The webcam adapter downscales to the processing resolution
 * before anything leaves the browser; grab() always reads the video
 * element's current image, so frames the loop was too busy for are simply
 * never sampled (stale frames drop themselves).
 */
import type { RawFrame } from './protocol.js';

export const CAPTURE_WIDTH = 320;
export const CAPTURE_HEIGHT = 240;

export interface FrameSource {
  /** Next frame, or null when the source is exhausted/closed. */
  grab(): Promise<RawFrame | null>;
}

export class CameraPermissionDenied extends Error {}

export class WebcamSource implements FrameSource {
  private constructor(
    private readonly video: HTMLVideoElement,
    private readonly stream: MediaStream,
    private readonly canvas: HTMLCanvasElement,
  ) {}

  static async open(): Promise<WebcamSource> {
    let stream: MediaStream;
    try {
      stream = await navigator.mediaDevices.getUserMedia({ video: true, audio: false });
    } catch (error) {
      throw new CameraPermissionDenied(String(error));
    }
    const video = document.createElement('video');
    video.srcObject = stream;
    video.muted = true;
    await video.play();
    const canvas = document.createElement('canvas');
    canvas.width = CAPTURE_WIDTH;
    canvas.height = CAPTURE_HEIGHT;
    return new WebcamSource(video, stream, canvas);
  }

  async grab(): Promise<RawFrame | null> {
    const ctx = this.canvas.getContext('2d', { willReadFrequently: true });
    if (!ctx || this.video.readyState < 2) {
      return null;
    }
    ctx.drawImage(this.video, 0, 0, CAPTURE_WIDTH, CAPTURE_HEIGHT);
    const image = ctx.getImageData(0, 0, CAPTURE_WIDTH, CAPTURE_HEIGHT);
    return { width: image.width, height: image.height, rgba: image.data };
  }

  close(): void {
    for (const track of this.stream.getTracks()) {
      track.stop();
    }
  }
}
