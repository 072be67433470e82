"""Gesture classification from hull features.

The split works in two steps: a low white-to-hull-area ratio means fingers
are spread (scissors); otherwise the hull span is compared against the span
recorded while the player showed a fist, which separates an open hand
(paper) from the fist itself (rock).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import CalibrationRejected, NotCalibrated
from .geometry import HullFeatures


class Gesture(str, Enum):
    ROCK = "rock"
    PAPER = "paper"
    SCISSORS = "scissors"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RecognitionConfig:
    scissors_ratio_max: float = 0.80  # white/total ratio below this reads as scissors
    paper_extent_factor: float = 1.25  # extent above factor * rock extent reads as paper
    min_area: float = 500.0           # hulls smaller than this mean "no hand"
    smoothing_window: int = 5         # majority vote window; 1 disables smoothing

    def __post_init__(self):
        if not 0 < self.scissors_ratio_max < 1:
            raise ValueError("scissors_ratio_max must be in (0, 1)")
        if self.paper_extent_factor <= 1:
            raise ValueError("paper_extent_factor must be > 1")
        if self.min_area < 0:
            raise ValueError("min_area must be >= 0")
        if self.smoothing_window < 1:
            raise ValueError("smoothing_window must be >= 1")


@dataclass(frozen=True)
class Calibration:
    rock_extent: float = 0.0
    captured_at: int = -1
    valid: bool = False


@dataclass(frozen=True)
class GestureReading:
    label: Gesture
    features: HullFeatures
    confidence_notes: str

    def to_json(self) -> dict:
        return {
            "label": self.label.value,
            "features": self.features.to_json(),
            "notes": self.confidence_notes,
        }


def calibrate(
    features: HullFeatures,
    cfg: RecognitionConfig = RecognitionConfig(),
    frame_index: int = 0,
) -> Calibration:
    """Record the fist's hull extent as the reference span.

    Raises CalibrationRejected when the hull is too small to be a hand.
    Calling again simply produces a fresh calibration (last write wins).
    """
    if features.total_area < cfg.min_area:
        raise CalibrationRejected(
            f"hull area {features.total_area:.0f} below minimum {cfg.min_area:.0f}"
        )
    return Calibration(rock_extent=features.extent, captured_at=frame_index, valid=True)


def classify(
    features: HullFeatures,
    calib: Calibration,
    cfg: RecognitionConfig = RecognitionConfig(),
) -> GestureReading:
    """Map hull features to a gesture via the ratio/extent decision table.

    area < min_area        -> unknown (no hand in view)
    ratio < scissors cut   -> scissors
    extent > factor * fist -> paper
    otherwise              -> rock
    """
    if not calib.valid:
        raise NotCalibrated("classification requires a stored fist calibration")
    if features.total_area < cfg.min_area:
        return GestureReading(
            label=Gesture.UNKNOWN,
            features=features,
            confidence_notes=f"area {features.total_area:.0f} < {cfg.min_area:.0f}",
        )
    if features.ratio < cfg.scissors_ratio_max:
        return GestureReading(
            label=Gesture.SCISSORS,
            features=features,
            confidence_notes=f"ratio {features.ratio:.3f} < {cfg.scissors_ratio_max}",
        )
    if features.extent > cfg.paper_extent_factor * calib.rock_extent:
        return GestureReading(
            label=Gesture.PAPER,
            features=features,
            confidence_notes=(
                f"extent {features.extent:.1f} > "
                f"{cfg.paper_extent_factor} * {calib.rock_extent:.1f}"
            ),
        )
    return GestureReading(
        label=Gesture.ROCK,
        features=features,
        confidence_notes=f"extent {features.extent:.1f} within fist range",
    )


def smooth(readings: Sequence[GestureReading]) -> GestureReading:
    """Majority vote over recent readings to suppress single-frame flicker.

    A tie for the most frequent label, a majority of unknowns, or an empty
    window all come out as unknown. The returned reading carries the most
    recent features.
    """
    if not readings:
        return GestureReading(Gesture.UNKNOWN, HullFeatures.empty(), "no readings")
    counts = Counter(r.label for r in readings)
    ranked = counts.most_common()
    top_label, top_count = ranked[0]
    tied = len(ranked) > 1 and ranked[1][1] == top_count
    if tied or top_label is Gesture.UNKNOWN:
        return GestureReading(
            Gesture.UNKNOWN, readings[-1].features, "no majority" if tied else "majority unknown"
        )
    return GestureReading(
        top_label, readings[-1].features, f"majority {top_count}/{len(readings)}"
    )
