/**
 * Sequential capture loop: one frame in flight at a time. The next frame is
 * grabbed only after the previous result arrives, so the camera's
 * intermediate frames are dropped rather than queued.
 */
import type { FrameResult, RawFrame } from './protocol.js';
import type { FrameSource } from './camera.js';

export interface LoopOptions {
  intervalMs?: number; // pacing between submissions, ~10 fps by default
  maxFrames?: number;
  sleep?: (ms: number) => Promise<void>;
}

export interface LoopHandle {
  stop(): void;
  done: Promise<number>; // resolves with the number of frames submitted
}

const realSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export function startCaptureLoop(
  source: FrameSource,
  submit: (frame: RawFrame) => Promise<FrameResult>,
  onResult: (result: FrameResult) => void,
  options: LoopOptions = {},
): LoopHandle {
  const intervalMs = options.intervalMs ?? 100;
  const maxFrames = options.maxFrames ?? Number.POSITIVE_INFINITY;
  const sleep = options.sleep ?? realSleep;
  let stopped = false;

  const done = (async () => {
    let submitted = 0;
    while (!stopped && submitted < maxFrames) {
      const frame = await source.grab();
      if (frame === null || stopped) {
        break;
      }
      const result = await submit(frame);
      onResult(result);
      submitted += 1;
      if (intervalMs > 0 && submitted < maxFrames) {
        await sleep(intervalMs);
      }
    }
    return submitted;
  })();

  return {
    stop: () => {
      stopped = true;
    },
    done,
  };
}
