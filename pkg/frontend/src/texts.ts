/**
 * Client-side cache of service-translated strings.
 *
 * Every key is the English phrase itself; the service answers batch lookups
 * through its per-locale phrase table, and a key the service has no entry
 * for comes back verbatim, so rendering degrades to English instead of
 * breaking.
 */

export const UI_KEYS = [
  'Rock',
  'Paper',
  'Scissors',
  'Unknown',
  'Calibrating',
  'Selecting opponent',
  'In match',
  'Boss match',
  'Victory',
  'Defeat',
  'Show your rock gesture to calibrate',
  'Calibration stored',
  'No hand detected',
  'Choose your move',
  'Round draw',
  'You win the round',
  'You lose the round',
  'You win the match',
  'You lose the match',
  'Match drawn, play again',
  'Respect points',
  'Opponent',
  'Servant',
  'Boss',
  'Round',
  'Wins',
  'Losses',
  'Draws',
  'Game over',
  'Play',
  'Quit',
  'Options',
  'Debug overlay',
  'Language',
  'Countdown',
  'Background captured',
  'Waiting for background frame',
  'Camera permission denied',
  'Start match',
  'Next round',
] as const;

export class TextStore {
  private map = new Map<string, string>();

  replaceAll(texts: Record<string, string>): void {
    this.map = new Map(Object.entries(texts));
  }

  merge(texts: Record<string, string> | undefined): void {
    for (const [key, value] of Object.entries(texts ?? {})) {
      this.map.set(key, value);
    }
  }

  /** Localized text for a key; unknown keys render as themselves. */
  render(key: string): string {
    return this.map.get(key) ?? key;
  }

  size(): number {
    return this.map.size;
  }
}
