"""Configuration files.

`configuracao.conf` is a UTF-8 `key=value` file with `#` comment lines.
Servant rosters live beside it in `servo_<id>.conf` files; when none are
present the built-in roster applies. Every knob has a default, so a missing
config file is not an error, but an unknown key or unparsable value is.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .errors import ConfigInvalid
from .game import GameConfig, Servant
from .imaging import DEFAULT_EDGE_LEVEL, DEFAULT_SUBTRACT_K
from .recognition import RecognitionConfig

ENV_CONFIG_PATH = "GESTURE_RPS_CONFIG"

_INT_KEYS = {
    "boss_threshold",
    "initial_respect",
    "smoothing_window",
    "background_k",
    "edge_level",
    "boss_rounds_per_match",
    "rng_seed",
}
_FLOAT_KEYS = {"scissors_ratio_max", "paper_extent_factor", "min_area"}
_STR_KEYS = {"default_language"}
KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS

_SERVANT_KEYS = {"points_awarded", "points_removed", "probability", "rounds_per_match"}


@dataclass(frozen=True)
class AppConfig:
    game: GameConfig
    recognition: RecognitionConfig
    background_k: int = DEFAULT_SUBTRACT_K
    edge_level: int = DEFAULT_EDGE_LEVEL
    default_language: str = "pt_BR"
    rng_seed: Optional[int] = None

    @classmethod
    def defaults(cls) -> "AppConfig":
        return cls(game=GameConfig(), recognition=RecognitionConfig())


def parse_conf(text: str) -> dict[str, str]:
    """Parse `key=value` lines; `#` lines are comments, blanks are skipped."""
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigInvalid(f"line {number} is not key=value: {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _coerce(key: str, value) -> object:
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _STR_KEYS:
            return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad value for {key}: {value!r}") from exc
    raise ConfigInvalid(f"unknown config key: {key}")


def load_servants(directory: Path) -> Optional[tuple[Servant, ...]]:
    """Read `servo_<id>.conf` files from a directory; None when there are none."""
    found = sorted(directory.glob("servo_*.conf"))
    if not found:
        return None
    servants = []
    for path in found:
        match = re.fullmatch(r"servo_(\d+)\.conf", path.name)
        if not match:
            raise ConfigInvalid(f"servant file name must be servo_<id>.conf: {path.name}")
        fields = parse_conf(path.read_text(encoding="utf-8"))
        unknown = set(fields) - _SERVANT_KEYS
        if unknown:
            raise ConfigInvalid(f"{path.name}: unknown keys {sorted(unknown)}")
        missing = {"points_awarded", "points_removed", "probability"} - set(fields)
        if missing:
            raise ConfigInvalid(f"{path.name}: missing keys {sorted(missing)}")
        try:
            servants.append(
                Servant(
                    id=int(match.group(1)),
                    points_awarded=int(fields["points_awarded"]),
                    points_removed=int(fields["points_removed"]),
                    probability=int(fields["probability"]),
                    rounds_per_match=int(fields.get("rounds_per_match", 3)),
                )
            )
        except ValueError as exc:
            raise ConfigInvalid(f"{path.name}: {exc}") from exc
    return tuple(servants)


def load_app_config(
    path: Optional[os.PathLike] = None,
    overrides: Optional[Mapping[str, object]] = None,
) -> AppConfig:
    """Resolve the full configuration from defaults, a file, and overrides.

    `overrides` (e.g. per-session options) win over the file, which wins over
    defaults. Unknown keys and invalid values raise ConfigInvalid.
    """
    merged: dict[str, object] = {}
    roster = None
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigInvalid(f"config file not found: {path}")
        for key, value in parse_conf(path.read_text(encoding="utf-8")).items():
            merged[key] = _coerce(key, value)
        roster = load_servants(path.parent)
    for key, value in (overrides or {}).items():
        merged[key] = _coerce(key, value)

    game_kwargs = {}
    for key in ("boss_threshold", "initial_respect", "boss_rounds_per_match"):
        if key in merged:
            game_kwargs[key] = merged[key]
    if roster is not None:
        game_kwargs["roster"] = roster

    recog_kwargs = {
        key: merged[key]
        for key in ("scissors_ratio_max", "paper_extent_factor", "min_area", "smoothing_window")
        if key in merged
    }
    try:
        game = GameConfig(**game_kwargs)
        recognition = RecognitionConfig(**recog_kwargs)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc

    background_k = merged.get("background_k", DEFAULT_SUBTRACT_K)
    edge_level = merged.get("edge_level", DEFAULT_EDGE_LEVEL)
    if not 0 <= background_k <= 765:
        raise ConfigInvalid(f"background_k {background_k} outside [0, 765]")
    if not 0 <= edge_level:
        raise ConfigInvalid(f"edge_level {edge_level} must be >= 0")

    return AppConfig(
        game=game,
        recognition=recognition,
        background_k=background_k,
        edge_level=edge_level,
        default_language=merged.get("default_language", "pt_BR"),
        rng_seed=merged.get("rng_seed"),
    )


def config_path_from_env(explicit: Optional[str] = None) -> Optional[Path]:
    """Explicit path if given, else the GESTURE_RPS_CONFIG environment variable."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_CONFIG_PATH)
    return Path(env) if env else None
