/**
 * In-memory stand-in for the backend, used by tests and the ?mock=1 demo
 * mode. It mirrors the documented protocol: calibration phase, 3-tick
 * countdown (ticked per live frame here), reveal records, respect scoring
 * and batch phrase lookups. Classification is a crude white-pixel
 * measurement on the mock side; the UI still only ever sees labels inside
 * frame results, exactly as with the real service.
 */
import type {
  FrameResult,
  GameService,
  RawFrame,
  Role,
  RoundInfo,
  SessionOptions,
  StateSnapshot,
} from './protocol.js';

const PT_BR: Record<string, string> = {
  Rock: 'Pedra',
  Paper: 'Papel',
  Scissors: 'Tesoura',
  Unknown: 'Desconhecido',
  Calibrating: 'Calibrando',
  'Selecting opponent': 'Escolhendo oponente',
  'In match': 'Em partida',
  'Boss match': 'Partida contra o chefe',
  Victory: 'Vitória',
  Defeat: 'Derrota',
  'Show your rock gesture to calibrate': 'Mostre o gesto de pedra para calibrar',
  'Calibration stored': 'Calibragem armazenada',
  'No hand detected': 'Nenhuma mão detectada',
  'Choose your move': 'Escolha a sua jogada',
  'Round draw': 'Jogada empatada',
  'You win the round': 'Você venceu a jogada',
  'You lose the round': 'Você perdeu a jogada',
  'You win the match': 'Você venceu a partida',
  'You lose the match': 'Você perdeu a partida',
  'Match drawn, play again': 'Partida empatada, jogue novamente',
  'Respect points': 'Pontos de respeito',
  Opponent: 'Oponente',
  Servant: 'Servo',
  Boss: 'Chefe',
  Round: 'Jogada',
  Wins: 'Vitórias',
  Losses: 'Derrotas',
  Draws: 'Empates',
  'Game over': 'Fim de jogo',
  Play: 'Jogar',
  Quit: 'Sair',
  Options: 'Opções',
  'Debug overlay': 'Sobreposição de depuração',
  Language: 'Idioma',
  Countdown: 'Contagem regressiva',
  'Background captured': 'Fundo capturado',
  'Waiting for background frame': 'Aguardando o quadro de fundo',
  'Camera permission denied': 'Permissão de câmera negada',
  'Start match': 'Iniciar partida',
  'Next round': 'Próxima jogada',
};

const TABLES: Record<string, Record<string, string>> = {
  pt_BR: PT_BR,
  en_US: {},
};

const PHASE_KEY: Record<string, string> = {
  calibrating: 'Calibrating',
  selecting_opponent: 'Selecting opponent',
  in_match: 'In match',
  boss_match: 'Boss match',
  victory: 'Victory',
  defeat: 'Defeat',
};
const PROMPT_KEY: Record<string, string> = {
  calibrating: 'Show your rock gesture to calibrate',
  selecting_opponent: 'Start match',
  in_match: 'Choose your move',
  boss_match: 'Choose your move',
  victory: 'Game over',
  defeat: 'Game over',
};
const GESTURE_KEY: Record<string, string> = {
  rock: 'Rock',
  paper: 'Paper',
  scissors: 'Scissors',
  unknown: 'Unknown',
};
const MOVES = ['rock', 'paper', 'scissors'] as const;
const BEATS: Record<string, string> = { rock: 'scissors', scissors: 'paper', paper: 'rock' };

interface Measure {
  area: number;
  span: number;
  fill: number;
  hull: [number, number][];
}

function measure(frame: RawFrame): Measure {
  let area = 0;
  let minX = Number.POSITIVE_INFINITY;
  let minY = Number.POSITIVE_INFINITY;
  let maxX = -1;
  let maxY = -1;
  const { width, height, rgba } = frame;
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const offset = (y * width + x) * 4;
      if (rgba[offset] + rgba[offset + 1] + rgba[offset + 2] >= 600) {
        area += 1;
        if (x < minX) minX = x;
        if (x > maxX) maxX = x;
        if (y < minY) minY = y;
        if (y > maxY) maxY = y;
      }
    }
  }
  if (area === 0) {
    return { area: 0, span: 0, fill: 0, hull: [] };
  }
  const w = maxX - minX + 1;
  const h = maxY - minY + 1;
  return {
    area,
    span: Math.hypot(w, h),
    fill: area / (w * h),
    hull: [
      [maxX, maxY],
      [maxX, minY],
      [minX, minY],
      [minX, maxY],
    ],
  };
}

export class MockGameService implements GameService {
  private locale = 'pt_BR';
  private phase = 'calibrating';
  private respect = 1;
  private countdown: number | null = null;
  private roundWins = 0;
  private roundLosses = 0;
  private roundDraws = 0;
  private history: [string, string, string][] = [];
  private calibSpan = 0;
  private last: Measure | null = null;
  private hasBackground = false;
  private rngState = 1;
  private readonly roundsPerMatch = 3;
  private readonly bossThreshold = 10;

  private random(): number {
    // deterministic LCG so scripted runs replay identically
    this.rngState = (this.rngState * 1103515245 + 12345) % 2147483648;
    return this.rngState / 2147483648;
  }

  private t(key: string): string {
    return TABLES[this.locale]?.[key] ?? key;
  }

  private texts(): Record<string, string> {
    return {
      phase: this.t(PHASE_KEY[this.phase]),
      prompt: this.t(PROMPT_KEY[this.phase]),
      respect_label: this.t('Respect points'),
    };
  }

  async createSession(options: SessionOptions = {}): Promise<StateSnapshot> {
    this.locale = options.locale ?? 'pt_BR';
    this.rngState = options.seed ?? 1;
    return this.snapshot();
  }

  async lookupTexts(keys: string[]): Promise<Record<string, string>> {
    const out: Record<string, string> = {};
    for (const key of keys) {
      out[key] = this.t(key);
    }
    return out;
  }

  private classify(m: Measure): string {
    if (!this.calibSpan || m.area < 200) {
      return 'unknown';
    }
    if (m.fill < 0.5) {
      return 'scissors';
    }
    if (m.span > 1.4 * this.calibSpan) {
      return 'paper';
    }
    return 'rock';
  }

  async submitFrame(frame: RawFrame, role: Role): Promise<FrameResult> {
    if (role === 'background') {
      this.hasBackground = true;
      return {
        type: 'frame_result',
        role,
        phase: this.phase,
        texts: { ...this.texts(), status: this.t('Background captured') },
      };
    }
    if (!this.hasBackground) {
      throw new Error(this.t('Waiting for background frame'));
    }
    const m = measure(frame);
    this.last = m;
    const label = this.classify(m);
    let round: RoundInfo | null = null;
    if ((this.phase === 'in_match' || this.phase === 'boss_match') && this.countdown !== null) {
      if (this.countdown === 0) {
        round = this.resolveRound(label);
      } else {
        this.countdown -= 1;
      }
    }
    return {
      type: 'frame_result',
      role,
      phase: this.phase,
      gesture: {
        label,
        features: { total_area: m.area, white_area: m.area, ratio: m.fill, extent: m.span },
        notes: 'mock reading',
      },
      raw_label: label,
      hull: m.hull,
      countdown: this.countdown,
      round,
      texts: { ...this.texts(), gesture: this.t(GESTURE_KEY[label]) },
    };
  }

  private resolveRound(label: string): RoundInfo {
    if (label === 'unknown') {
      this.countdown = 3;
      return { resolved: false, texts: { reason: this.t('No hand detected') } };
    }
    this.countdown = null;
    const opponent = MOVES[Math.floor(this.random() * 3) % 3];
    let outcome: string;
    if (label === opponent) {
      outcome = 'draw';
      this.roundDraws += 1;
    } else if (BEATS[label] === opponent) {
      outcome = 'player_wins';
      this.roundWins += 1;
    } else {
      outcome = 'opponent_wins';
      this.roundLosses += 1;
    }
    this.history.push([label, opponent, outcome]);
    let verdict = 'continue';
    if (this.roundWins * 2 > this.roundsPerMatch) {
      verdict = 'player';
    } else if (this.roundLosses * 2 > this.roundsPerMatch) {
      verdict = 'opponent';
    } else if (this.roundWins + this.roundLosses >= this.roundsPerMatch) {
      verdict = 'drawn';
    }
    if (verdict === 'player' || verdict === 'opponent') {
      this.respect = verdict === 'player' ? this.respect + 2 : Math.max(0, this.respect - 1);
      this.roundWins = this.roundLosses = this.roundDraws = 0;
      if (this.respect === 0) {
        this.phase = 'defeat';
      } else if (this.phase === 'boss_match') {
        this.phase = verdict === 'player' ? 'victory' : 'defeat';
      } else if (this.respect >= this.bossThreshold) {
        this.phase = 'boss_match';
      } else {
        this.phase = 'selecting_opponent';
      }
    } else if (verdict === 'drawn') {
      this.roundWins = this.roundLosses = this.roundDraws = 0;
    }
    const info: RoundInfo = {
      resolved: true,
      player: label,
      opponent,
      outcome,
      match: verdict,
      respect: this.respect,
      phase: this.phase,
      texts: {
        player: this.t(GESTURE_KEY[label]),
        opponent: this.t(GESTURE_KEY[opponent]),
        outcome: this.t(
          outcome === 'draw'
            ? 'Round draw'
            : outcome === 'player_wins'
              ? 'You win the round'
              : 'You lose the round',
        ),
      },
    };
    return info;
  }

  async command(command: string, args?: Record<string, unknown>): Promise<StateSnapshot> {
    switch (command) {
      case 'calibrate': {
        if (this.phase !== 'calibrating') {
          throw new Error(`calibrate is illegal in phase ${this.phase}`);
        }
        if (!this.last || this.last.area < 200) {
          throw new Error(this.t('No hand detected'));
        }
        this.calibSpan = this.last.span;
        this.phase = 'selecting_opponent';
        break;
      }
      case 'start_match': {
        if (this.phase !== 'selecting_opponent') {
          throw new Error(`start_match is illegal in phase ${this.phase}`);
        }
        this.phase = 'in_match';
        this.countdown = 3;
        break;
      }
      case 'next_round': {
        if (this.phase !== 'in_match' && this.phase !== 'boss_match') {
          throw new Error(`next_round is illegal in phase ${this.phase}`);
        }
        this.countdown = 3;
        break;
      }
      case 'set_language': {
        this.locale = String(args?.locale ?? this.locale);
        break;
      }
      case 'get_state':
        break;
      default:
        throw new Error(`unknown command ${command}`);
    }
    return this.snapshot();
  }

  snapshot(): StateSnapshot {
    return {
      phase: this.phase,
      respect: this.respect,
      opponent:
        this.phase === 'in_match'
          ? { kind: 'servant', id: 1, rounds_per_match: this.roundsPerMatch }
          : this.phase === 'boss_match'
            ? { kind: 'boss', rounds_per_match: 5 }
            : null,
      round_wins: this.roundWins,
      round_losses: this.roundLosses,
      round_draws: this.roundDraws,
      history: [...this.history],
      calibration: { valid: this.calibSpan > 0, rock_extent: this.calibSpan, captured_at: 0 },
      countdown: this.countdown,
      locale: this.locale,
      texts: this.texts(),
    };
  }
}
