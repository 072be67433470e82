/**
 * DOM layer: renders the controller's state and forwards button clicks.
 * `?mock=1` runs fully offline against the in-memory service with the
 * synthetic gesture fixtures instead of the webcam.
 */
import { CAPTURE_HEIGHT, CAPTURE_WIDTH, CameraPermissionDenied, WebcamSource, type FrameSource } from './camera.js';
import { GameController } from './controller.js';
import { ScriptedCamera, diskFrame, solidFrame, vFrame } from './fixtures.js';
import { MockGameService } from './mockService.js';
import { drawHullPolyline } from './overlay.js';
import { HttpGameService, type GameService } from './protocol.js';
import type { UiState } from './state.js';
import { TextStore } from './texts.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function mockCamera(): ScriptedCamera {
  const frames = [solidFrame(CAPTURE_WIDTH, CAPTURE_HEIGHT)];
  for (let i = 0; i < 400; i++) {
    const wobble = (i * 7) % 11;
    if (i % 90 < 30) frames.push(diskFrame(160 + wobble, 130, 30));
    else if (i % 90 < 60) frames.push(diskFrame(160 + wobble, 130, 48));
    else frames.push(vFrame(160 + wobble, 150, 30));
  }
  return new ScriptedCamera(frames);
}

export async function init(root: HTMLElement): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const useMock = params.get('mock') === '1';

  const preview = el('canvas', 'preview');
  preview.width = CAPTURE_WIDTH;
  preview.height = CAPTURE_HEIGHT;
  const status = el('div', 'status');
  const screenBox = el('div', 'screen');
  const buttons = el('div', 'buttons');
  root.append(preview, status, screenBox, buttons);

  let service: GameService;
  let camera: FrameSource;
  if (useMock) {
    service = new MockGameService();
    camera = mockCamera();
  } else {
    service = new HttpGameService(params.get('service') ?? '');
    try {
      camera = await WebcamSource.open();
    } catch (error) {
      if (error instanceof CameraPermissionDenied) {
        // no session traffic after a denial; the key itself is the i18n
        // fallback rendering
        status.textContent = new TextStore().render('Camera permission denied');
        return;
      }
      throw error;
    }
  }

  const controller = new GameController(service, camera, params.get('lang') ?? 'pt_BR');
  controller.onChange((state) => render(state));

  function button(labelKey: string, onClick: () => void | Promise<void>): HTMLButtonElement {
    const node = el('button', 'action', controller.t(labelKey));
    node.onclick = () => {
      Promise.resolve(onClick()).catch((error: Error) => {
        status.textContent = error.message; // service errors arrive localized
      });
    };
    return node;
  }

  function renderPreview(state: UiState): void {
    const ctx = preview.getContext('2d');
    if (!ctx) return;
    ctx.fillStyle = '#111';
    ctx.fillRect(0, 0, preview.width, preview.height);
    const hull = state.lastResult?.hull;
    if (state.overlayEnabled && hull && hull.length >= 2) {
      ctx.strokeStyle = 'lime';
      ctx.lineWidth = 2;
      drawHullPolyline(ctx, hull, CAPTURE_WIDTH, CAPTURE_HEIGHT, preview.width, preview.height);
    }
  }

  function render(state: UiState): void {
    renderPreview(state);
    buttons.replaceChildren();
    screenBox.replaceChildren();
    const t = (key: string) => controller.t(key);
    status.textContent = state.error
      ? t(state.error)
      : state.notice
        ? t(state.notice)
        : (state.lastResult?.texts?.phase ?? t('Calibrating'));

    switch (state.screen) {
      case 'calibration': {
        screenBox.append(el('h2', 'title', t('Calibrating')));
        screenBox.append(el('p', 'prompt', t('Show your rock gesture to calibrate')));
        buttons.append(
          button('Background captured', () => controller.captureBackground()),
          button('Calibrating', () => controller.calibrate()),
        );
        break;
      }
      case 'options': {
        screenBox.append(el('h2', 'title', t('Options')));
        screenBox.append(
          el('p', 'respect', `${t('Respect points')}: ${state.snapshot?.respect ?? ''}`),
        );
        buttons.append(
          button('Start match', () => controller.startMatch()),
          button('Debug overlay', () => controller.toggleOverlay()),
          button('Language', () => {
            const next = state.locale === 'pt_BR' ? 'en_US' : 'pt_BR';
            return controller.setLanguage(next);
          }),
        );
        break;
      }
      case 'match': {
        screenBox.append(el('h2', 'title', t('In match')));
        screenBox.append(el('p', 'prompt', t('Choose your move')));
        screenBox.append(
          el('p', 'countdown', `${t('Countdown')}: ${state.countdown ?? '-'}`),
        );
        const gesture = state.lastResult?.texts?.gesture;
        if (gesture) screenBox.append(el('p', 'gesture', gesture));
        break;
      }
      case 'reveal': {
        const reveal = state.reveal;
        screenBox.append(el('h2', 'title', t('Round')));
        if (reveal) {
          screenBox.append(
            el('p', 'moves', `${reveal.texts?.player ?? ''} x ${reveal.texts?.opponent ?? ''}`),
            el('p', 'outcome', reveal.texts?.outcome ?? ''),
            el('p', 'respect', `${t('Respect points')}: ${reveal.respect ?? ''}`),
          );
        }
        const phase = reveal?.phase ?? state.snapshot?.phase;
        if (phase === 'in_match' || phase === 'boss_match') {
          buttons.append(button('Next round', () => controller.nextRound()));
        } else {
          buttons.append(button('Game over', () => controller.advance()));
        }
        break;
      }
      case 'game_over': {
        const phase = state.snapshot?.phase;
        screenBox.append(el('h2', 'title', phase === 'victory' ? t('Victory') : t('Defeat')));
        screenBox.append(el('p', 'respect', `${t('Respect points')}: ${state.snapshot?.respect ?? 0}`));
        buttons.append(button('Quit', () => window.location.reload()));
        break;
      }
    }
  }

  await controller.start();
  await controller.captureBackground();
  controller.startLiveLoop({ intervalMs: 100 });
}
