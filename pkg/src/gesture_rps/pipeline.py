"""Composition of the imaging stages into a frame-to-features pipeline.

Order: RGB background subtraction and Otsu-binarized grayscale are ANDed into
one foreground mask, edges come from Sobel on that mask, the hull wraps the
edge points, and the features are measured on the pre-Sobel mask.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateHistogram
from .geometry import (
    Hull,
    HullFeatures,
    Point,
    compute_features,
    extract_points,
    jarvis_hull,
    row_extremes,
)
from .imaging import (
    DEFAULT_EDGE_LEVEL,
    DEFAULT_SUBTRACT_K,
    OTSU_FALLBACK_LEVEL,
    BinaryImage,
    Frame,
    GrayImage,
    background_subtract,
    binarize,
    histogram,
    mask_and,
    otsu_threshold,
    sobel,
    to_grayscale,
)


@dataclass(frozen=True)
class PipelineConfig:
    background_k: int = DEFAULT_SUBTRACT_K
    edge_level: int = DEFAULT_EDGE_LEVEL
    otsu_fallback: int = OTSU_FALLBACK_LEVEL


@dataclass(frozen=True)
class PipelineResult:
    gray: GrayImage
    foreground: BinaryImage
    otsu_k: Optional[int]  # None when the histogram was degenerate
    threshold_used: int
    binary: BinaryImage
    mask: BinaryImage
    edges: BinaryImage
    points: list[Point]
    hull: Optional[Hull]
    features: HullFeatures


def process_frame(
    background: Frame, frame: Frame, cfg: PipelineConfig = PipelineConfig()
) -> PipelineResult:
    """Run one live frame against the stored background frame."""
    foreground = background_subtract(background, frame, cfg.background_k)
    gray = to_grayscale(frame)
    try:
        otsu_k: Optional[int] = otsu_threshold(histogram(gray))
        threshold_used = otsu_k
    except DegenerateHistogram:
        otsu_k = None
        threshold_used = cfg.otsu_fallback
    binary = binarize(gray, threshold_used)
    mask = mask_and(foreground, binary)
    edges = sobel(mask, cfg.edge_level)
    points = extract_points(edges)
    if points:
        # thinning to per-row extremes leaves the hull unchanged but bounds
        # the march input at two points per row
        hull: Optional[Hull] = jarvis_hull(row_extremes(points))
        features = compute_features(hull, mask)
    else:
        hull = None
        features = HullFeatures.empty()
    return PipelineResult(
        gray=gray,
        foreground=foreground,
        otsu_k=otsu_k,
        threshold_used=threshold_used,
        binary=binary,
        mask=mask,
        edges=edges,
        points=points,
        hull=hull,
        features=features,
    )
