"""Pixel-level pipeline stages.

Grayscale conversion, histogram / Otsu thresholding, binarization, simple
background subtraction against a reference frame, and Sobel edge detection.
All operations are pure: inputs are immutable (arrays are stored read-only)
and identical inputs produce bit-identical outputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import DegenerateHistogram, DimensionMismatch, EmptyImage, ImageTooSmall

GRAY_LEVELS = 256
DEFAULT_SUBTRACT_K = 100   # summed |dR|+|dG|+|dB| threshold, range [0, 765]
DEFAULT_EDGE_LEVEL = 128   # gradient magnitude threshold after clamping to 255
OTSU_FALLBACK_LEVEL = 128  # used by callers when the histogram is degenerate


def _readonly(arr, dtype=np.uint8) -> np.ndarray:
    src = np.asarray(arr)
    if src.size:
        if src.dtype.kind not in "iub":
            raise ValueError(f"expected integer pixel data, got dtype {src.dtype}")
        info = np.iinfo(dtype)
        if src.min() < info.min or src.max() > info.max:
            raise ValueError(f"values outside [{info.min}, {info.max}]")
    out = src.astype(dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Frame:
    """Raw RGBA image, `pixels` shaped (height, width, 4), channels in [0, 255]."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        arr = _readonly(self.pixels)
        if arr.shape != (self.height, self.width, 4):
            raise ValueError(
                f"pixel block {arr.shape} does not match {self.height}x{self.width}x4"
            )
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_array(cls, arr) -> "Frame":
        arr = np.asarray(arr)
        h, w, _ = arr.shape
        return cls(width=w, height=h, pixels=arr)

    @classmethod
    def from_bytes(cls, width: int, height: int, rgba: bytes) -> "Frame":
        if len(rgba) != width * height * 4:
            raise DimensionMismatch(
                f"expected {width * height * 4} RGBA bytes, got {len(rgba)}"
            )
        arr = np.frombuffer(rgba, dtype=np.uint8).reshape(height, width, 4)
        return cls(width=width, height=height, pixels=arr)

    def to_bytes(self) -> bytes:
        return self.pixels.tobytes()


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Single-channel image, `values` shaped (height, width), each in [0, 255]."""

    width: int
    height: int
    values: np.ndarray

    def __post_init__(self):
        arr = _readonly(self.values)
        if arr.shape != (self.height, self.width):
            raise ValueError(f"value block {arr.shape} does not match {self.height}x{self.width}")
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_array(cls, arr) -> "GrayImage":
        arr = np.asarray(arr)
        h, w = arr.shape
        return cls(width=w, height=h, values=arr)


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Mask image: every value is exactly 0 or 255."""

    width: int
    height: int
    values: np.ndarray

    def __post_init__(self):
        arr = _readonly(self.values)
        if arr.shape != (self.height, self.width):
            raise ValueError(f"value block {arr.shape} does not match {self.height}x{self.width}")
        if arr.size and not np.isin(arr, (0, 255)).all():
            raise ValueError("binary image may only contain 0 and 255")
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_array(cls, arr) -> "BinaryImage":
        arr = np.asarray(arr)
        h, w = arr.shape
        return cls(width=w, height=h, values=arr)


@dataclass(frozen=True, eq=False)
class Histogram:
    """256-bin intensity histogram; `total` is the pixel count behind it."""

    counts: np.ndarray
    total: int

    def __post_init__(self):
        arr = _readonly(self.counts, dtype=np.int64)
        if arr.shape != (GRAY_LEVELS,):
            raise ValueError(f"histogram needs {GRAY_LEVELS} bins, got {arr.shape}")
        if arr.size and arr.min() < 0:
            raise ValueError("histogram counts must be non-negative")
        if int(arr.sum()) != self.total:
            raise ValueError("histogram total does not match the sum of its bins")
        object.__setattr__(self, "counts", arr)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "Histogram":
        counts = np.zeros(GRAY_LEVELS, dtype=np.int64)
        for level, count in mapping.items():
            counts[level] = count
        return cls(counts=counts, total=int(counts.sum()))


AnyImage = Union[GrayImage, BinaryImage]


def to_grayscale(frame: Frame) -> GrayImage:
    """Average the R, G and B channels (floor division; alpha is ignored)."""
    rgb = frame.pixels[:, :, :3].astype(np.int32)
    gray = rgb.sum(axis=2) // 3
    return GrayImage(width=frame.width, height=frame.height, values=gray.astype(np.uint8))


def histogram(img: GrayImage) -> Histogram:
    """Count pixels per intensity level. Raises EmptyImage on 0-pixel input."""
    if img.values.size == 0:
        raise EmptyImage("cannot build a histogram from an empty image")
    counts = np.bincount(img.values.ravel(), minlength=GRAY_LEVELS).astype(np.int64)
    return Histogram(counts=counts, total=int(counts.sum()))


def otsu_threshold(hist: Histogram) -> int:
    """Threshold level maximizing the between-class variance of the histogram.

    A level k splits intensities into [0, k-1] and [k, 255]; only splits where
    both classes are populated are considered, and ties go to the smallest k.
    With class weight w / pixel-value sum s per side and n total pixels, the
    between-class variance is proportional to (s0*w1 - s1*w0)^2 / (w0*w1), so
    candidates are ranked by exact integer cross-multiplication; no float
    round-off can reorder near-ties.

    Raises DegenerateHistogram when every pixel shares one intensity.
    """
    if hist.total <= 0:
        raise EmptyImage("histogram is empty")
    counts = [int(c) for c in hist.counts]
    n = hist.total
    total_sum = sum(level * c for level, c in enumerate(counts))

    best_k = -1
    best_num = -1
    best_den = 1
    w0 = 0
    s0 = 0
    for k in range(1, GRAY_LEVELS):
        w0 += counts[k - 1]
        s0 += (k - 1) * counts[k - 1]
        if w0 == 0:
            continue
        w1 = n - w0
        if w1 == 0:
            break
        num = (s0 * w1 - (total_sum - s0) * w0) ** 2
        den = w0 * w1
        if num * best_den > best_num * den:
            best_num, best_den, best_k = num, den, k
    if best_k < 0:
        raise DegenerateHistogram("all pixels share one intensity")
    return best_k


def binarize(img: GrayImage, k: int) -> BinaryImage:
    """Map values >= k to 255 (foreground white) and the rest to 0."""
    if not 0 <= k <= 255:
        raise ValueError(f"threshold {k} outside [0, 255]")
    out = np.where(img.values >= k, 255, 0).astype(np.uint8)
    return BinaryImage(width=img.width, height=img.height, values=out)


def background_subtract(first: Frame, current: Frame, k: int = DEFAULT_SUBTRACT_K) -> BinaryImage:
    """Foreground mask: 255 where |dR| + |dG| + |dB| against `first` reaches k.

    `k` is environment-dependent (lighting, camera noise) and ranges over
    [0, 765]. Symmetric in its two frames by construction.
    """
    if (first.width, first.height) != (current.width, current.height):
        raise DimensionMismatch(
            f"background is {first.width}x{first.height}, "
            f"frame is {current.width}x{current.height}"
        )
    if not 0 <= k <= 765:
        raise ValueError(f"subtraction threshold {k} outside [0, 765]")
    a = first.pixels[:, :, :3].astype(np.int32)
    b = current.pixels[:, :, :3].astype(np.int32)
    diff = np.abs(a - b).sum(axis=2)
    out = np.where(diff >= k, 255, 0).astype(np.uint8)
    return BinaryImage(width=first.width, height=first.height, values=out)


def sobel(img: AnyImage, edge_level: int = DEFAULT_EDGE_LEVEL) -> BinaryImage:
    """Binary edge map from the 3x3 Sobel gradient magnitude.

    Interior pixels get sqrt(Gx^2 + Gy^2) clamped to 255 and thresholded at
    `edge_level`; the one-pixel border is set to 0 rather than inventing
    out-of-image data.
    """
    if img.width < 3 or img.height < 3:
        raise ImageTooSmall(f"{img.width}x{img.height} image is smaller than 3x3")
    v = img.values.astype(np.int64)
    gx = (v[:-2, 2:] + 2 * v[1:-1, 2:] + v[2:, 2:]) - (
        v[:-2, :-2] + 2 * v[1:-1, :-2] + v[2:, :-2]
    )
    gy = (v[2:, :-2] + 2 * v[2:, 1:-1] + v[2:, 2:]) - (
        v[:-2, :-2] + 2 * v[:-2, 1:-1] + v[:-2, 2:]
    )
    strength = np.minimum(np.sqrt(gx * gx + gy * gy), 255.0)
    out = np.zeros((img.height, img.width), dtype=np.uint8)
    out[1:-1, 1:-1] = np.where(strength >= edge_level, 255, 0)
    return BinaryImage(width=img.width, height=img.height, values=out)


def mask_and(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    """Pixelwise AND of two masks (255 only where both are 255)."""
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatch(f"{a.width}x{a.height} vs {b.width}x{b.height}")
    out = np.where((a.values == 255) & (b.values == 255), 255, 0).astype(np.uint8)
    return BinaryImage(width=a.width, height=a.height, values=out)
