/**
 * Headless game flow: owns the UI state, the text cache and the capture
 * loop, and talks to the service. The DOM layer only renders what lives
 * here, which keeps the whole flow testable with a scripted camera and the
 * mock service.
 */
import type { FrameResult, GameService, SessionOptions } from './protocol.js';
import type { FrameSource } from './camera.js';
import { startCaptureLoop, type LoopHandle, type LoopOptions } from './captureLoop.js';
import {
  applyFrameResult,
  applySnapshot,
  dismissReveal,
  initialState,
  toggleOverlay,
  withError,
  type UiState,
} from './state.js';
import { TextStore, UI_KEYS } from './texts.js';

export type StateListener = (state: UiState) => void;

export class GameController {
  state: UiState;
  readonly texts = new TextStore();
  private listeners: StateListener[] = [];
  private loop: LoopHandle | null = null;

  constructor(
    private readonly service: GameService,
    private camera: FrameSource,
    locale = 'pt_BR',
  ) {
    this.state = initialState(locale);
  }

  /** Swap the frame source (e.g. webcam reconnect); stops any running loop. */
  setCamera(camera: FrameSource): void {
    this.stopLiveLoop();
    this.camera = camera;
  }

  onChange(listener: StateListener): void {
    this.listeners.push(listener);
  }

  private setState(next: UiState): void {
    this.state = next;
    for (const listener of this.listeners) {
      listener(next);
    }
  }

  /** Localized text for a key (key itself until texts are fetched). */
  t(key: string): string {
    return this.texts.render(key);
  }

  async start(options: SessionOptions = {}): Promise<void> {
    const snapshot = await this.service.createSession({
      locale: this.state.locale,
      ...options,
    });
    await this.refreshTexts();
    this.setState(applySnapshot(this.state, snapshot));
  }

  async refreshTexts(): Promise<void> {
    this.texts.replaceAll(await this.service.lookupTexts([...UI_KEYS]));
    this.setState({ ...this.state }); // re-render every screen
  }

  async captureBackground(): Promise<void> {
    const frame = await this.camera.grab();
    if (!frame) {
      return;
    }
    const result = await this.service.submitFrame(frame, 'background');
    this.setState(applyFrameResult(this.state, result));
  }

  /** Start the sequential live-frame loop (~10 fps unless overridden). */
  startLiveLoop(options: LoopOptions = {}): LoopHandle {
    this.stopLiveLoop();
    this.loop = startCaptureLoop(
      this.camera,
      (frame) => this.service.submitFrame(frame, 'live'),
      (result) => this.handleResult(result),
      options,
    );
    return this.loop;
  }

  stopLiveLoop(): void {
    this.loop?.stop();
    this.loop = null;
  }

  private handleResult(result: FrameResult): void {
    this.setState(applyFrameResult(this.state, result));
  }

  async calibrate(): Promise<void> {
    const snapshot = await this.service.command('calibrate');
    this.setState({ ...applySnapshot(this.state, snapshot), notice: 'Calibration stored' });
  }

  async startMatch(): Promise<void> {
    const snapshot = await this.service.command('start_match');
    this.setState(applySnapshot(dismissReveal(this.state), snapshot));
  }

  async nextRound(): Promise<void> {
    const snapshot = await this.service.command('next_round');
    this.setState(applySnapshot(dismissReveal(this.state), snapshot));
  }

  /** Leave the reveal screen without arming another round. */
  advance(): void {
    this.setState(dismissReveal(this.state));
  }

  async setLanguage(tag: string): Promise<void> {
    const snapshot = await this.service.command('set_language', { locale: tag });
    await this.refreshTexts();
    this.setState(applySnapshot(this.state, snapshot));
  }

  toggleOverlay(): void {
    this.setState(toggleOverlay(this.state));
  }

  async refreshState(): Promise<void> {
    this.setState(applySnapshot(this.state, await this.service.command('get_state')));
  }

  fail(errorKey: string): void {
    this.stopLiveLoop();
    this.setState(withError(this.state, errorKey));
  }
}
