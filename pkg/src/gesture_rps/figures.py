"""Matplotlib figures for the offline report path.

Every figure is written with pinned dpi and metadata so repeated runs produce
byte-identical PNG files.
"""
from __future__ import annotations

import os
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .geometry import Hull, HullFeatures
from .imaging import GRAY_LEVELS, AnyImage, Histogram

_SAVE = {"dpi": 100, "metadata": {"Software": "gesture-rps"}}


def save_histogram_figure(hist: Histogram, threshold: Optional[int], path: os.PathLike) -> None:
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.bar(range(GRAY_LEVELS), hist.counts, width=1.0, color="0.4")
    if threshold is not None:
        ax.axvline(threshold, color="crimson", linewidth=1.5, label=f"threshold k={threshold}")
        ax.legend(loc="upper right")
    ax.set_xlim(0, GRAY_LEVELS - 1)
    ax.set_xlabel("gray level")
    ax.set_ylabel("pixels")
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_stage_grid(stages: Sequence[tuple[str, AnyImage]], path: os.PathLike) -> None:
    """One panel per (name, image) pair, in the given order."""
    n = max(len(stages), 1)
    fig, axes = plt.subplots(1, n, figsize=(3 * n, 3))
    if n == 1:
        axes = [axes]
    for ax, (name, img) in zip(axes, stages):
        ax.imshow(img.values, cmap="gray", vmin=0, vmax=255, interpolation="nearest")
        ax.set_title(name, fontsize=9)
        ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_hull_overlay(
    edges: AnyImage,
    hull: Optional[Hull],
    features: HullFeatures,
    label: Optional[str],
    path: os.PathLike,
) -> None:
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.imshow(edges.values, cmap="gray", vmin=0, vmax=255, interpolation="nearest")
    if hull is not None:
        xs = [p.x for p in hull.vertices] + [hull.vertices[0].x]
        ys = [p.y for p in hull.vertices] + [hull.vertices[0].y]
        ax.plot(xs, ys, color="lime", linewidth=1.5)
        ax.scatter(xs[:-1], ys[:-1], color="lime", s=12)
    title = f"area {features.total_area:.0f}  ratio {features.ratio:.2f}  extent {features.extent:.1f}"
    if label:
        title = f"{label}  |  {title}"
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_respect_trajectory(respect: Sequence[int], path: os.PathLike) -> None:
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.step(range(len(respect)), respect, where="post", color="steelblue")
    ax.set_xlabel("match")
    ax.set_ylabel("respect points")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
