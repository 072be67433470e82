/**
 * Wire types and encoding for the gesture service.
 *
 * Binary frame messages: 0x46 ('F'), role byte (0 background / 1 live),
 * uint16 LE width, uint16 LE height, two zero bytes, then RGBA pixels.
 * Everything else is JSON.
 */

export type Role = 'background' | 'live';

export interface RawFrame {
  width: number;
  height: number;
  rgba: Uint8Array | Uint8ClampedArray;
}

export interface GestureInfo {
  label: string;
  features: { total_area: number; white_area: number; ratio: number; extent: number };
  notes: string;
}

export interface RoundInfo {
  resolved: boolean;
  player?: string;
  opponent?: string;
  outcome?: string;
  match?: string;
  respect?: number;
  phase?: string;
  texts?: Record<string, string>;
}

export interface FrameResult {
  type: 'frame_result';
  role: Role;
  frame_index?: number;
  phase: string;
  gesture?: GestureInfo;
  raw_label?: string;
  hull?: [number, number][];
  otsu_k?: number | null;
  countdown?: number | null;
  round?: RoundInfo | null;
  texts: Record<string, string>;
}

export interface OpponentInfo {
  kind: string;
  id?: number;
  rounds_per_match: number;
  points_awarded?: number;
  points_removed?: number;
}

export interface StateSnapshot {
  phase: string;
  respect: number;
  opponent: OpponentInfo | null;
  round_wins: number;
  round_losses: number;
  round_draws: number;
  history: [string, string, string][];
  calibration: { valid: boolean; rock_extent: number; captured_at: number };
  countdown: number | null;
  locale: string;
  texts: Record<string, string>;
}

export interface SessionOptions {
  locale?: string;
  seed?: number;
  config?: Record<string, number | string>;
}

/**
 * Everything the UI needs from the backend. Implemented over HTTP/WebSocket
 * by HttpGameService and in memory by MockGameService; the UI never
 * classifies gestures itself.
 */
export interface GameService {
  createSession(options?: SessionOptions): Promise<StateSnapshot>;
  submitFrame(frame: RawFrame, role: Role): Promise<FrameResult>;
  command(command: string, args?: Record<string, unknown>): Promise<StateSnapshot>;
  lookupTexts(keys: string[]): Promise<Record<string, string>>;
}

export const FRAME_MAGIC = 0x46;
const HEADER_BYTES = 8;

export function encodeBinaryFrame(frame: RawFrame, role: Role): ArrayBuffer {
  if (frame.rgba.length !== frame.width * frame.height * 4) {
    throw new Error(
      `frame carries ${frame.rgba.length} bytes, expected ${frame.width * frame.height * 4}`,
    );
  }
  const buffer = new ArrayBuffer(HEADER_BYTES + frame.rgba.length);
  const view = new DataView(buffer);
  view.setUint8(0, FRAME_MAGIC);
  view.setUint8(1, role === 'background' ? 0 : 1);
  view.setUint16(2, frame.width, true);
  view.setUint16(4, frame.height, true);
  new Uint8Array(buffer, HEADER_BYTES).set(frame.rgba);
  return buffer;
}

/** Decode a binary frame message (used by tests to check the encoder). */
export function decodeBinaryFrame(buffer: ArrayBuffer): { frame: RawFrame; role: Role } {
  const view = new DataView(buffer);
  if (view.getUint8(0) !== FRAME_MAGIC) {
    throw new Error('bad frame magic');
  }
  const role: Role = view.getUint8(1) === 0 ? 'background' : 'live';
  const width = view.getUint16(2, true);
  const height = view.getUint16(4, true);
  const rgba = new Uint8Array(buffer, HEADER_BYTES);
  if (rgba.length !== width * height * 4) {
    throw new Error('frame payload does not match its header');
  }
  return { frame: { width, height, rgba }, role };
}

interface PendingResult {
  resolve: (result: FrameResult) => void;
  reject: (error: Error) => void;
}

/** HTTP + WebSocket client for the real service. */
export class HttpGameService implements GameService {
  private readonly baseUrl: string;
  private sessionId = '';
  private socket: WebSocket | null = null;
  private pending: PendingResult[] = [];

  constructor(baseUrl = '') {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async post(path: string, body: unknown): Promise<any> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body ?? {}),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`${path} failed (${response.status}): ${detail}`);
    }
    return response.json();
  }

  async createSession(options: SessionOptions = {}): Promise<StateSnapshot> {
    const body = await this.post('/sessions', options);
    this.sessionId = body.session;
    await this.openSocket();
    return body as StateSnapshot;
  }

  private openSocket(): Promise<void> {
    const origin = this.baseUrl || window.location.origin;
    const wsUrl =
      origin.replace(/^http/, 'ws') + `/sessions/${this.sessionId}/frames`;
    return new Promise((resolve, reject) => {
      const socket = new WebSocket(wsUrl);
      socket.binaryType = 'arraybuffer';
      socket.onopen = () => resolve();
      socket.onerror = () => reject(new Error('frame channel failed to open'));
      socket.onmessage = (event) => this.onMessage(String(event.data));
      socket.onclose = () => {
        for (const waiter of this.pending.splice(0)) {
          waiter.reject(new Error('frame channel closed'));
        }
      };
      this.socket = socket;
    });
  }

  private onMessage(text: string): void {
    const message = JSON.parse(text);
    const waiter = this.pending.shift();
    if (!waiter) {
      return; // unsolicited push; frames are strictly request/response here
    }
    if (message.type === 'error') {
      waiter.reject(new Error(message.message ?? message.error));
    } else {
      waiter.resolve(message as FrameResult);
    }
  }

  submitFrame(frame: RawFrame, role: Role): Promise<FrameResult> {
    const socket = this.socket;
    if (!socket || socket.readyState !== WebSocket.OPEN) {
      return Promise.reject(new Error('frame channel is not open'));
    }
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      socket.send(encodeBinaryFrame(frame, role));
    });
  }

  async command(command: string, args?: Record<string, unknown>): Promise<StateSnapshot> {
    return this.post(`/sessions/${this.sessionId}/command`, { command, args });
  }

  async lookupTexts(keys: string[]): Promise<Record<string, string>> {
    const body = await this.post(`/sessions/${this.sessionId}/texts`, { keys });
    return body.texts as Record<string, string>;
  }
}
