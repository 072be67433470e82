/**
 * UI state machine. Screens mirror the service phases; the reveal screen is
 * the one client-held detour (it shows a resolved round until the player
 * moves on). All transitions are pure functions over immutable state.
 */
import type { FrameResult, RoundInfo, StateSnapshot } from './protocol.js';

export type Screen = 'calibration' | 'options' | 'match' | 'reveal' | 'game_over';

export interface UiState {
  screen: Screen;
  countdown: number | null; // non-null only while the match screen counts down
  overlayEnabled: boolean; // debug hull polyline; off until toggled in options
  lastResult: FrameResult | null;
  locale: string;
  snapshot: StateSnapshot | null;
  reveal: RoundInfo | null;
  notice: string | null; // i18n KEY of a transient message
  error: string | null; // i18n KEY of a fatal problem (camera denied, ...)
}

export function initialState(locale: string): UiState {
  return {
    screen: 'calibration',
    countdown: null,
    overlayEnabled: false,
    lastResult: null,
    locale,
    snapshot: null,
    reveal: null,
    notice: null,
    error: null,
  };
}

export function screenForPhase(phase: string): Screen {
  switch (phase) {
    case 'calibrating':
      return 'calibration';
    case 'selecting_opponent':
      return 'options';
    case 'in_match':
    case 'boss_match':
      return 'match';
    default:
      return 'game_over';
  }
}

export function applySnapshot(state: UiState, snapshot: StateSnapshot): UiState {
  const next: UiState = { ...state, snapshot, locale: snapshot.locale };
  if (state.screen !== 'reveal') {
    next.screen = screenForPhase(snapshot.phase);
    next.countdown = next.screen === 'match' ? snapshot.countdown : null;
  }
  return next;
}

export function applyFrameResult(state: UiState, result: FrameResult): UiState {
  const next: UiState = { ...state, lastResult: result };
  if (result.role === 'background') {
    next.notice = 'Background captured';
    return next;
  }
  const round = result.round;
  if (round && round.resolved) {
    next.screen = 'reveal';
    next.reveal = round;
    next.countdown = null;
    next.notice = null;
    return next;
  }
  if (round && !round.resolved) {
    next.notice = 'No hand detected'; // round replays; countdown restarted
  }
  if (next.screen === 'match') {
    next.countdown = result.countdown ?? null;
  }
  return next;
}

/** Leave the reveal screen toward whatever phase the service reached. */
export function dismissReveal(state: UiState): UiState {
  const phase = state.reveal?.phase ?? state.snapshot?.phase ?? 'calibrating';
  return {
    ...state,
    screen: screenForPhase(phase),
    reveal: null,
    countdown: null,
    notice: null,
  };
}

export function toggleOverlay(state: UiState): UiState {
  return { ...state, overlayEnabled: !state.overlayEnabled };
}

export function withError(state: UiState, errorKey: string): UiState {
  return { ...state, error: errorKey };
}
