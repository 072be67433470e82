"""Hand-gesture rock-paper-scissors engine.

An image pipeline (grayscale, Otsu binarization, background subtraction,
Sobel edges, convex hull, area features) classifies the player's hand, and a
match engine with respect-point scoring, weighted opponents and multilanguage
text plays the game. See the `service` module for the network interface and
`cli` for the offline harness.
"""
from .errors import GestureRpsError
from .geometry import Hull, HullFeatures, Point, jarvis_hull, shoelace_area, white_area_in_hull
from .imaging import (
    BinaryImage,
    Frame,
    GrayImage,
    Histogram,
    background_subtract,
    binarize,
    histogram,
    otsu_threshold,
    sobel,
    to_grayscale,
)
from .pipeline import PipelineConfig, PipelineResult, process_frame
from .recognition import Calibration, Gesture, GestureReading, RecognitionConfig, classify, smooth

__version__ = "0.1.0"

__all__ = [
    "GestureRpsError",
    "Frame",
    "GrayImage",
    "BinaryImage",
    "Histogram",
    "to_grayscale",
    "histogram",
    "otsu_threshold",
    "binarize",
    "background_subtract",
    "sobel",
    "Point",
    "Hull",
    "HullFeatures",
    "jarvis_hull",
    "shoelace_area",
    "white_area_in_hull",
    "Gesture",
    "GestureReading",
    "Calibration",
    "RecognitionConfig",
    "classify",
    "smooth",
    "PipelineConfig",
    "PipelineResult",
    "process_frame",
    "__version__",
]
