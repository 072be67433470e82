"""Session-oriented service: frames in, gesture readings and game state out.

A session owns one background frame, one calibration, one game state and one
seeded random source; its frames and commands are processed strictly in
arrival order, so replaying a recorded session reproduces every result.
The HTTP/WebSocket layer is a thin wrapper over the Session/SessionManager
classes, which are usable directly (and deterministically, via an injected
clock) from library code.

Frame wire formats accepted on the WebSocket:
  binary: 0x46 ('F'), role byte (0 background / 1 live), uint16 LE width,
          uint16 LE height, two zero bytes, then width*height*4 RGBA bytes
  JSON:   {"type": "frame", "role": "live", "width": w, "height": h,
           "rgba_base64": "..."}
"""
from __future__ import annotations

import asyncio
import base64
import json
import secrets
import struct
import time
from collections import deque
from random import Random
from typing import Callable, Optional

from fastapi import Body, FastAPI, HTTPException, WebSocket
from starlette.websockets import WebSocketDisconnect

from .config import AppConfig, load_app_config
from .errors import (
    BackgroundMissing,
    CalibrationRejected,
    ConfigInvalid,
    DimensionMismatch,
    GestureRpsError,
    IllegalTransition,
    NotCalibrated,
)
from .game import (
    Boss,
    MatchVerdict,
    Outcome,
    Phase,
    apply_match_result,
    match_over,
    new_game,
    opponent_move,
    pick_servant,
    record_round,
    reset_round_counters,
)
from .i18n import PhraseTable, load_locale_tag
from .imaging import Frame
from .pipeline import PipelineConfig, process_frame
from .recognition import Calibration, Gesture, GestureReading, calibrate, classify, smooth

FRAME_MAGIC = 0x46
ROLE_BACKGROUND = "background"
ROLE_LIVE = "live"
_ROLE_BYTES = {0: ROLE_BACKGROUND, 1: ROLE_LIVE}
_HEADER = struct.Struct("<BBHHxx")

COUNTDOWN_TICKS = 3
TICK_SECONDS = 1.0

_PHASE_TEXT_KEY = {
    Phase.CALIBRATING: "Calibrating",
    Phase.SELECTING_OPPONENT: "Selecting opponent",
    Phase.IN_MATCH: "In match",
    Phase.BOSS_MATCH: "Boss match",
    Phase.VICTORY: "Victory",
    Phase.DEFEAT: "Defeat",
}
_PHASE_PROMPT_KEY = {
    Phase.CALIBRATING: "Show your rock gesture to calibrate",
    Phase.SELECTING_OPPONENT: "Start match",
    Phase.IN_MATCH: "Choose your move",
    Phase.BOSS_MATCH: "Choose your move",
    Phase.VICTORY: "Game over",
    Phase.DEFEAT: "Game over",
}
_GESTURE_TEXT_KEY = {
    Gesture.ROCK: "Rock",
    Gesture.PAPER: "Paper",
    Gesture.SCISSORS: "Scissors",
    Gesture.UNKNOWN: "Unknown",
}
_OUTCOME_TEXT_KEY = {
    Outcome.PLAYER_WINS: "You win the round",
    Outcome.OPPONENT_WINS: "You lose the round",
    Outcome.DRAW: "Round draw",
}
_VERDICT_TEXT_KEY = {
    MatchVerdict.PLAYER: "You win the match",
    MatchVerdict.OPPONENT: "You lose the match",
    MatchVerdict.DRAWN: "Match drawn, play again",
}


def encode_frame_message(frame: Frame, role: str) -> bytes:
    role_byte = 0 if role == ROLE_BACKGROUND else 1
    return _HEADER.pack(FRAME_MAGIC, role_byte, frame.width, frame.height) + frame.to_bytes()


def decode_frame_message(data: bytes) -> tuple[Frame, str]:
    if len(data) < _HEADER.size:
        raise ValueError("frame message shorter than its header")
    magic, role_byte, width, height = _HEADER.unpack_from(data)
    if magic != FRAME_MAGIC:
        raise ValueError(f"bad frame magic {magic:#x}")
    if role_byte not in _ROLE_BYTES:
        raise ValueError(f"bad frame role byte {role_byte}")
    frame = Frame.from_bytes(width, height, data[_HEADER.size :])
    return frame, _ROLE_BYTES[role_byte]


def decode_json_frame(obj: dict) -> tuple[Frame, str]:
    role = obj.get("role")
    if role not in (ROLE_BACKGROUND, ROLE_LIVE):
        raise ValueError(f"bad frame role {role!r}")
    rgba = base64.b64decode(obj["rgba_base64"])
    return Frame.from_bytes(int(obj["width"]), int(obj["height"]), rgba), role


def canonical_json(obj) -> str:
    """Stable serialization used for every pushed result (replay-comparable)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class Session:
    """One player's stream of frames and commands."""

    def __init__(
        self,
        session_id: str,
        config: AppConfig,
        phrases: PhraseTable,
        rng: Random,
        clock: Callable[[], float] = time.monotonic,
        locales_dir=None,
    ):
        self.id = session_id
        self.config = config
        self.phrases = phrases
        self.rng = rng
        self.clock = clock
        self.locales_dir = locales_dir
        self.pipeline_cfg = PipelineConfig(
            background_k=config.background_k, edge_level=config.edge_level
        )
        self.game = new_game(config.game)
        self.background: Optional[Frame] = None
        self.frame_size: Optional[tuple[int, int]] = None
        self.calibration = Calibration()
        self.readings: deque[GestureReading] = deque(maxlen=config.recognition.smoothing_window)
        self.last_features = None
        self.frames_seen = 0
        self.countdown_start: Optional[float] = None

    # -- helpers ------------------------------------------------------------

    def _t(self, key: str) -> str:
        return self.phrases.lookup(key)

    def _texts(self) -> dict:
        return {
            "phase": self._t(_PHASE_TEXT_KEY[self.game.phase]),
            "prompt": self._t(_PHASE_PROMPT_KEY[self.game.phase]),
            "respect_label": self._t("Respect points"),
        }

    def _check_size(self, frame: Frame) -> None:
        if self.frame_size is None:
            self.frame_size = (frame.width, frame.height)
        elif (frame.width, frame.height) != self.frame_size:
            raise DimensionMismatch(
                f"session frames are {self.frame_size[0]}x{self.frame_size[1]}, "
                f"got {frame.width}x{frame.height}"
            )

    def _countdown_ticks(self) -> Optional[int]:
        if self.countdown_start is None:
            return None
        elapsed = self.clock() - self.countdown_start
        return max(COUNTDOWN_TICKS - int(elapsed // TICK_SECONDS), 0)

    # -- frames -------------------------------------------------------------

    def submit_frame(self, frame: Frame, role: str) -> dict:
        if role == ROLE_BACKGROUND:
            self._check_size(frame)
            self.background = frame
            return {
                "type": "frame_result",
                "role": ROLE_BACKGROUND,
                "phase": self.game.phase.value,
                "texts": {**self._texts(), "status": self._t("Background captured")},
            }
        if role != ROLE_LIVE:
            raise ValueError(f"bad frame role {role!r}")
        if self.background is None:
            raise BackgroundMissing("submit a background frame first")
        self._check_size(frame)

        stages = process_frame(self.background, frame, self.pipeline_cfg)
        self.last_features = stages.features
        self.frames_seen += 1
        if self.calibration.valid:
            reading = classify(stages.features, self.calibration, self.config.recognition)
        else:
            reading = GestureReading(Gesture.UNKNOWN, stages.features, "not calibrated")
        self.readings.append(reading)
        smoothed = smooth(list(self.readings))

        round_info = None
        ticks = self._countdown_ticks()
        if self.game.phase in (Phase.IN_MATCH, Phase.BOSS_MATCH) and ticks == 0:
            round_info = self._resolve_round(smoothed)
            ticks = self._countdown_ticks()

        return {
            "type": "frame_result",
            "role": ROLE_LIVE,
            "frame_index": self.frames_seen,
            "phase": self.game.phase.value,
            "gesture": smoothed.to_json(),
            "raw_label": reading.label.value,
            "hull": stages.hull.to_json() if stages.hull else [],
            "otsu_k": stages.otsu_k,
            "countdown": ticks,
            "round": round_info,
            "texts": {
                **self._texts(),
                "gesture": self._t(_GESTURE_TEXT_KEY[smoothed.label]),
            },
        }

    def _resolve_round(self, smoothed: GestureReading) -> dict:
        """The smoothed reading at counter zero becomes the player's move."""
        opponent = self.game.current_opponent
        if smoothed.label is Gesture.UNKNOWN:
            # nothing playable: restart the countdown and ask again
            self.countdown_start = self.clock()
            return {
                "resolved": False,
                "texts": {"reason": self._t("No hand detected")},
            }
        self.countdown_start = None
        opp_move = opponent_move(self.rng)
        outcome = record_round(self.game, smoothed.label, opp_move)
        verdict = match_over(self.game, opponent.rounds_per_match)
        if verdict is MatchVerdict.DRAWN:
            reset_round_counters(self.game)
        elif verdict is not MatchVerdict.CONTINUE:
            apply_match_result(self.game, won=verdict is MatchVerdict.PLAYER, opponent=opponent)
        info = {
            "resolved": True,
            "player": smoothed.label.value,
            "opponent": opp_move.value,
            "outcome": outcome.value,
            "match": verdict.value,
            "respect": self.game.respect,
            "phase": self.game.phase.value,
            "texts": {
                "player": self._t(_GESTURE_TEXT_KEY[smoothed.label]),
                "opponent": self._t(_GESTURE_TEXT_KEY[opp_move]),
                "outcome": self._t(_OUTCOME_TEXT_KEY[outcome]),
            },
        }
        if verdict is not MatchVerdict.CONTINUE:
            info["texts"]["match"] = self._t(_VERDICT_TEXT_KEY[verdict])
        return info

    # -- commands -----------------------------------------------------------

    def command(self, cmd: str, args: Optional[dict] = None) -> dict:
        args = args or {}
        if cmd == "calibrate":
            self._cmd_calibrate()
        elif cmd == "start_match":
            self._cmd_start_match()
        elif cmd == "next_round":
            self._cmd_next_round()
        elif cmd == "set_language":
            self._cmd_set_language(args.get("locale", ""))
        elif cmd != "get_state":
            raise ValueError(f"unknown command {cmd!r}")
        return self.snapshot()

    def _cmd_calibrate(self) -> None:
        if self.game.phase is not Phase.CALIBRATING:
            raise IllegalTransition(f"calibrate is only legal while calibrating, not {self.game.phase.value}")
        if self.last_features is None:
            raise CalibrationRejected("no live frame to calibrate from")
        self.calibration = calibrate(
            self.last_features, self.config.recognition, frame_index=self.frames_seen
        )
        # pre-calibration readings were all unknown; drop them so the vote
        # window starts clean
        self.readings.clear()
        self.game.phase = Phase.SELECTING_OPPONENT

    def _cmd_start_match(self) -> None:
        if self.game.phase is not Phase.SELECTING_OPPONENT:
            raise IllegalTransition(f"start_match is illegal in phase {self.game.phase.value}")
        if not self.calibration.valid:
            raise NotCalibrated("calibrate before starting a match")
        servant = pick_servant(self.config.game.roster, self.rng)
        self.game.current_opponent = servant
        self.game.phase = Phase.IN_MATCH
        reset_round_counters(self.game)
        self.countdown_start = self.clock()

    def _cmd_next_round(self) -> None:
        if self.game.phase not in (Phase.IN_MATCH, Phase.BOSS_MATCH):
            raise IllegalTransition(f"next_round is illegal in phase {self.game.phase.value}")
        if self.countdown_start is not None:
            raise IllegalTransition("a countdown is already running")
        self.countdown_start = self.clock()

    def _cmd_set_language(self, locale: str) -> None:
        if not locale:
            raise ValueError("set_language needs a locale tag")
        self.phrases = _load_phrases(locale, self.locales_dir)

    def lookup_texts(self, keys: list[str]) -> dict[str, str]:
        """Batch phrase lookup; unknown keys echo back per the fallback rule."""
        return {key: self._t(key) for key in keys}

    # -- state --------------------------------------------------------------

    def snapshot(self) -> dict:
        opponent = self.game.current_opponent
        if isinstance(opponent, Boss):
            opp = {"kind": "boss", "rounds_per_match": opponent.rounds_per_match}
        elif opponent is not None:
            opp = {
                "kind": "servant",
                "id": opponent.id,
                "rounds_per_match": opponent.rounds_per_match,
                "points_awarded": opponent.points_awarded,
                "points_removed": opponent.points_removed,
            }
        else:
            opp = None
        return {
            "phase": self.game.phase.value,
            "respect": self.game.respect,
            "opponent": opp,
            "round_wins": self.game.round_wins,
            "round_losses": self.game.round_losses,
            "round_draws": self.game.round_draws,
            "history": [[p.value, o.value, r.value] for p, o, r in self.game.history],
            "calibration": {
                "valid": self.calibration.valid,
                "rock_extent": self.calibration.rock_extent,
                "captured_at": self.calibration.captured_at,
            },
            "countdown": self._countdown_ticks(),
            "locale": self.phrases.locale,
            "texts": self._texts(),
        }


def _load_phrases(locale: str, locales_dir) -> PhraseTable:
    try:
        return load_locale_tag(locale, locales_dir)
    except FileNotFoundError:
        # unknown locale: an empty table makes every lookup echo its key
        return PhraseTable(locale)


class SessionManager:
    """Creates and tracks sessions; safe to share across request handlers."""

    _OPTION_KEYS = {"locale", "seed", "config"}

    def __init__(
        self,
        config_path=None,
        locales_dir=None,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.config_path = config_path
        self.locales_dir = locales_dir
        self.clock = clock
        self.base_config = load_app_config(config_path)
        self.sessions: dict[str, Session] = {}

    def create(self, options: Optional[dict] = None) -> Session:
        options = options or {}
        unknown = set(options) - self._OPTION_KEYS
        if unknown:
            raise ConfigInvalid(f"unknown session options: {sorted(unknown)}")
        overrides = options.get("config") or {}
        if not isinstance(overrides, dict):
            raise ConfigInvalid("session config overrides must be an object")
        config = (
            load_app_config(self.config_path, overrides) if overrides else self.base_config
        )
        locale = options.get("locale") or config.default_language
        seed = options.get("seed", config.rng_seed)
        rng = Random(seed) if seed is not None else Random(secrets.randbits(64))
        session_id = secrets.token_hex(8)
        session = Session(
            session_id=session_id,
            config=config,
            phrases=_load_phrases(locale, self.locales_dir),
            rng=rng,
            clock=self.clock,
            locales_dir=self.locales_dir,
        )
        self.sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        return self.sessions[session_id]


# ---------------------------------------------------------------------------
# HTTP / WebSocket layer

_ERROR_STATUS = {
    ConfigInvalid: 400,
    IllegalTransition: 409,
    BackgroundMissing: 409,
    DimensionMismatch: 409,
    CalibrationRejected: 409,
    NotCalibrated: 409,
}
_ERROR_TEXT_KEY = {
    BackgroundMissing: "Waiting for background frame",
    CalibrationRejected: "No hand detected",
    NotCalibrated: "Show your rock gesture to calibrate",
}


def _error_payload(session: Optional[Session], exc: GestureRpsError) -> dict:
    key = _ERROR_TEXT_KEY.get(type(exc))
    message = session._t(key) if (session and key) else str(exc)
    return {"error": type(exc).__name__, "message": message, "detail": str(exc)}


def create_app(config_path=None, locales_dir=None) -> FastAPI:
    manager = SessionManager(config_path=config_path, locales_dir=locales_dir)
    app = FastAPI(title="gesture-rps service")
    app.state.manager = manager
    locks: dict[str, asyncio.Lock] = {}

    def _session_or_404(session_id: str) -> Session:
        try:
            return manager.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {session_id}")

    def _raise_http(session: Optional[Session], exc: GestureRpsError):
        status = _ERROR_STATUS.get(type(exc), 409)
        raise HTTPException(status_code=status, detail=_error_payload(session, exc))

    @app.post("/sessions", status_code=201)
    async def create_session(options: dict = Body(default={})):
        try:
            session = manager.create(options)
        except GestureRpsError as exc:
            _raise_http(None, exc)
        return {"session": session.id, **session.snapshot()}

    @app.get("/sessions/{session_id}/state")
    async def get_state(session_id: str):
        return _session_or_404(session_id).snapshot()

    @app.post("/sessions/{session_id}/command")
    async def run_command(session_id: str, body: dict = Body(...)):
        session = _session_or_404(session_id)
        cmd = body.get("command")
        if not cmd:
            raise HTTPException(status_code=400, detail="missing 'command'")
        lock = locks.setdefault(session_id, asyncio.Lock())
        async with lock:
            try:
                return session.command(cmd, body.get("args"))
            except GestureRpsError as exc:
                _raise_http(session, exc)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/sessions/{session_id}/texts")
    async def lookup_texts(session_id: str, body: dict = Body(...)):
        session = _session_or_404(session_id)
        keys = body.get("keys")
        if not isinstance(keys, list) or not all(isinstance(k, str) and k for k in keys):
            raise HTTPException(status_code=400, detail="'keys' must be a list of non-empty strings")
        return {"locale": session.phrases.locale, "texts": session.lookup_texts(keys)}

    @app.websocket("/sessions/{session_id}/frames")
    async def frames(websocket: WebSocket, session_id: str):
        await websocket.accept()
        try:
            session = manager.get(session_id)
        except KeyError:
            await websocket.close(code=4404)
            return
        lock = locks.setdefault(session_id, asyncio.Lock())
        while True:
            try:
                message = await websocket.receive()
            except WebSocketDisconnect:
                break
            if message.get("type") == "websocket.disconnect":
                break
            try:
                if message.get("bytes") is not None:
                    frame, role = decode_frame_message(message["bytes"])
                elif message.get("text"):
                    obj = json.loads(message["text"])
                    if obj.get("type") != "frame":
                        raise ValueError(f"unsupported message type {obj.get('type')!r}")
                    frame, role = decode_json_frame(obj)
                else:
                    continue
                async with lock:
                    result = session.submit_frame(frame, role)
                await websocket.send_text(canonical_json(result))
            except GestureRpsError as exc:
                await websocket.send_text(canonical_json({"type": "error", **_error_payload(session, exc)}))
            except (ValueError, KeyError) as exc:
                await websocket.send_text(
                    canonical_json({"type": "error", "error": "BadMessage", "message": str(exc)})
                )

    return app
