"""Match engine: round resolution, respect scoring and opponent selection.

The player duels a roster of servants for respect points. Reaching the boss
threshold triggers the final match; dropping to zero respect ends the game.
Draw rounds are replayed and never count toward the best-of-N majority.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

from .errors import ConfigInvalid, IllegalTransition, RoundNotPlayable
from .recognition import Gesture


class Phase(str, Enum):
    CALIBRATING = "calibrating"
    SELECTING_OPPONENT = "selecting_opponent"
    IN_MATCH = "in_match"
    BOSS_MATCH = "boss_match"
    VICTORY = "victory"
    DEFEAT = "defeat"


class Outcome(str, Enum):
    PLAYER_WINS = "player_wins"
    OPPONENT_WINS = "opponent_wins"
    DRAW = "draw"


class MatchVerdict(str, Enum):
    PLAYER = "player"
    OPPONENT = "opponent"
    DRAWN = "drawn"
    CONTINUE = "continue"


MOVES = (Gesture.ROCK, Gesture.PAPER, Gesture.SCISSORS)
_BEATS = {
    Gesture.ROCK: Gesture.SCISSORS,
    Gesture.SCISSORS: Gesture.PAPER,
    Gesture.PAPER: Gesture.ROCK,
}


def resolve_round(player: Gesture, opponent: Gesture) -> Outcome:
    """Standard rules: rock > scissors > paper > rock; equal moves draw."""
    if player not in _BEATS or opponent not in _BEATS:
        raise RoundNotPlayable(f"cannot score {player!r} vs {opponent!r}")
    if player == opponent:
        return Outcome.DRAW
    if _BEATS[player] == opponent:
        return Outcome.PLAYER_WINS
    return Outcome.OPPONENT_WINS


@dataclass(frozen=True)
class Servant:
    id: int
    points_awarded: int    # respect gained when the player wins the match
    points_removed: int    # respect lost when the player loses the match
    probability: int       # selection weight, percent; roster sums to 100
    rounds_per_match: int = 3


@dataclass(frozen=True)
class Boss:
    rounds_per_match: int = 5


DEFAULT_ROSTER = (
    Servant(id=1, points_awarded=1, points_removed=1, probability=40),
    Servant(id=2, points_awarded=3, points_removed=2, probability=35),
    Servant(id=3, points_awarded=2, points_removed=3, probability=15),
    Servant(id=4, points_awarded=0, points_removed=10, probability=5),
    Servant(id=5, points_awarded=2, points_removed=3, probability=5),
)


@dataclass(frozen=True)
class GameConfig:
    boss_threshold: int = 10
    initial_respect: int = 1
    roster: tuple[Servant, ...] = DEFAULT_ROSTER
    boss_rounds_per_match: int = 5

    def __post_init__(self):
        if not self.boss_threshold > self.initial_respect > 0:
            raise ConfigInvalid(
                f"need boss_threshold > initial_respect > 0, got "
                f"{self.boss_threshold} / {self.initial_respect}"
            )
        if not self.roster:
            raise ConfigInvalid("servant roster is empty")
        total = sum(s.probability for s in self.roster)
        if total != 100:
            raise ConfigInvalid(f"servant probabilities sum to {total}, expected 100")
        if any(s.probability < 0 for s in self.roster):
            raise ConfigInvalid("servant probabilities must be non-negative")
        if any(s.rounds_per_match < 1 for s in self.roster) or self.boss_rounds_per_match < 1:
            raise ConfigInvalid("rounds_per_match must be >= 1")


@dataclass
class GameState:
    config: GameConfig
    respect: int
    phase: Phase = Phase.CALIBRATING
    current_opponent: Optional[Union[Servant, Boss]] = None
    round_wins: int = 0
    round_losses: int = 0
    round_draws: int = 0
    history: list[tuple[Gesture, Gesture, Outcome]] = field(default_factory=list)


def new_game(config: GameConfig = GameConfig()) -> GameState:
    return GameState(config=config, respect=config.initial_respect)


def pick_servant(roster, rng: random.Random) -> Servant:
    """Weighted choice via one uniform draw against cumulative percentages."""
    total = sum(s.probability for s in roster)
    if total != 100:
        raise ConfigInvalid(f"servant probabilities sum to {total}, expected 100")
    threshold = rng.random() * 100.0
    cumulative = 0
    for servant in roster:
        cumulative += servant.probability
        if threshold < cumulative:
            return servant
    return roster[-1]


def opponent_move(rng: random.Random) -> Gesture:
    return MOVES[rng.randrange(3)]


def reset_round_counters(state: GameState) -> None:
    state.round_wins = 0
    state.round_losses = 0
    state.round_draws = 0


def record_round(state: GameState, player: Gesture, opponent: Gesture) -> Outcome:
    """Score one round into the state. Draws count separately and are replayed."""
    if state.phase not in (Phase.IN_MATCH, Phase.BOSS_MATCH):
        raise IllegalTransition(f"cannot play a round in phase {state.phase.value}")
    outcome = resolve_round(player, opponent)
    if outcome is Outcome.PLAYER_WINS:
        state.round_wins += 1
    elif outcome is Outcome.OPPONENT_WINS:
        state.round_losses += 1
    else:
        state.round_draws += 1
    state.history.append((player, opponent, outcome))
    return outcome


def match_over(state: GameState, rounds_per_match: int) -> MatchVerdict:
    """Best-of-N over non-draw rounds; a split after N decisive rounds replays."""
    if state.round_wins * 2 > rounds_per_match:
        return MatchVerdict.PLAYER
    if state.round_losses * 2 > rounds_per_match:
        return MatchVerdict.OPPONENT
    if state.round_wins + state.round_losses >= rounds_per_match:
        return MatchVerdict.DRAWN
    return MatchVerdict.CONTINUE


def apply_match_result(state: GameState, won: bool, opponent: Union[Servant, Boss]) -> GameState:
    """Settle a finished match: adjust respect and move to the next phase.

    Servant matches award/remove the servant's points; respect clamps at 0,
    which ends the game, and reaching the boss threshold queues the boss.
    The boss match is terminal either way: a win is victory, a loss forfeits
    all respect.
    """
    cfg = state.config
    if state.phase is Phase.IN_MATCH:
        if not isinstance(opponent, Servant):
            raise IllegalTransition("a servant match must settle against a servant")
        if won:
            state.respect += opponent.points_awarded
        else:
            state.respect = max(0, state.respect - opponent.points_removed)
        if state.respect == 0:
            state.phase = Phase.DEFEAT
            state.current_opponent = None
        elif state.respect >= cfg.boss_threshold:
            state.phase = Phase.BOSS_MATCH
            state.current_opponent = Boss(rounds_per_match=cfg.boss_rounds_per_match)
        else:
            state.phase = Phase.SELECTING_OPPONENT
            state.current_opponent = None
    elif state.phase is Phase.BOSS_MATCH:
        if won:
            state.phase = Phase.VICTORY
        else:
            state.respect = 0
            state.phase = Phase.DEFEAT
        state.current_opponent = None
    else:
        raise IllegalTransition(f"no match to settle in phase {state.phase.value}")
    reset_round_counters(state)
    return state


# ---------------------------------------------------------------------------
# headless simulation

Strategy = Callable[[Gesture, int], Gesture]
"""Maps (opponent's move, global round index) to the player's move."""


def always_win(opponent: Gesture, _index: int) -> Gesture:
    return _BEATS[_BEATS[opponent]]  # the move the opponent's move loses to


def always_lose(opponent: Gesture, _index: int) -> Gesture:
    return _BEATS[opponent]


def scripted(moves: list[Gesture]) -> Strategy:
    if not moves:
        raise ConfigInvalid("scripted strategy needs at least one move")

    def play(_opponent: Gesture, index: int) -> Gesture:
        return moves[index % len(moves)]

    return play


@dataclass(frozen=True)
class RoundRecord:
    player: Gesture
    opponent: Gesture
    outcome: Outcome


@dataclass(frozen=True)
class MatchRecord:
    opponent_kind: str               # "servant" or "boss"
    opponent_id: Optional[int]
    rounds: tuple[RoundRecord, ...]
    verdict: MatchVerdict
    respect_after: int
    phase_after: Phase


def _play_match(state, opponent, strategy, rng, round_index):
    rounds = []
    while True:
        opp = opponent_move(rng)
        player = strategy(opp, round_index)
        round_index += 1
        outcome = record_round(state, player, opp)
        rounds.append(RoundRecord(player=player, opponent=opp, outcome=outcome))
        verdict = match_over(state, opponent.rounds_per_match)
        if verdict is not MatchVerdict.CONTINUE:
            return rounds, verdict, round_index


def run_game(
    config: GameConfig,
    rng: random.Random,
    strategy: Strategy,
    max_matches: int = 10_000,
) -> list[MatchRecord]:
    """Play whole games headlessly, returning one record per match.

    Calibration is a camera concern, so the simulation starts at opponent
    selection. Drawn matches are recorded and replayed against the same
    opponent.
    """
    state = new_game(config)
    state.phase = Phase.SELECTING_OPPONENT
    records: list[MatchRecord] = []
    round_index = 0
    opponent: Union[Servant, Boss, None] = None
    while state.phase not in (Phase.VICTORY, Phase.DEFEAT) and len(records) < max_matches:
        if state.phase is Phase.SELECTING_OPPONENT:
            opponent = pick_servant(config.roster, rng)
            state.current_opponent = opponent
            state.phase = Phase.IN_MATCH
            reset_round_counters(state)
        elif state.phase is Phase.BOSS_MATCH:
            opponent = state.current_opponent
        rounds, verdict, round_index = _play_match(state, opponent, strategy, rng, round_index)
        kind = "boss" if isinstance(opponent, Boss) else "servant"
        opponent_id = None if isinstance(opponent, Boss) else opponent.id
        if verdict is MatchVerdict.DRAWN:
            reset_round_counters(state)
        else:
            apply_match_result(state, won=verdict is MatchVerdict.PLAYER, opponent=opponent)
        records.append(
            MatchRecord(
                opponent_kind=kind,
                opponent_id=opponent_id,
                rounds=tuple(rounds),
                verdict=verdict,
                respect_after=state.respect,
                phase_after=state.phase,
            )
        )
    return records
