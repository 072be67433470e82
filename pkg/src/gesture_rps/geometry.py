"""Convex hull, polygon area and hull-derived features.

Hulls are computed by gift wrapping (Jarvis march) with exact integer cross
products, so collinearity and turn direction are never subject to float
round-off. Areas come from the shoelace formula; the white-pixel count inside
a hull uses an exact rational scanline so boundary pixels are included
deterministically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import EmptyPointSet
from .imaging import BinaryImage


class Point(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class Hull:
    """Convex hull vertices in march order plus the size of the input set.

    Vertices wind counter-clockwise as seen on screen (x right, y down) and
    start from the point with the greatest x (ties: greatest y). Collinear
    boundary points are excluded, so consecutive edge cross products share a
    strict sign.
    """

    vertices: tuple[Point, ...]
    source_count: int

    def __post_init__(self):
        if not self.vertices:
            raise EmptyPointSet("a hull needs at least one vertex")
        object.__setattr__(self, "vertices", tuple(Point(int(p[0]), int(p[1])) for p in self.vertices))

    def to_json(self) -> list[list[int]]:
        return [[p.x, p.y] for p in self.vertices]


@dataclass(frozen=True)
class HullFeatures:
    total_area: float   # shoelace area of the hull polygon, px^2
    white_area: int     # white mask pixels inside/on the hull
    ratio: float        # white_area / total_area (0 when the hull is degenerate)
    extent: float       # distance between the lexicographic min and max vertices

    @classmethod
    def empty(cls) -> "HullFeatures":
        return cls(total_area=0.0, white_area=0, ratio=0.0, extent=0.0)

    def to_json(self) -> dict:
        return {
            "total_area": self.total_area,
            "white_area": self.white_area,
            "ratio": self.ratio,
            "extent": self.extent,
        }


def _cross(o: Point, a: Point, b: Point) -> int:
    """Cross product of (a - o) x (b - o); > 0 when b is a tighter wrap than a."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _dist2(a: Point, b: Point) -> int:
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def extract_points(edges: BinaryImage) -> list[Point]:
    """Coordinates of every 255 pixel, in row-major scan order."""
    rows, cols = np.nonzero(edges.values == 255)
    return [Point(int(x), int(y)) for y, x in zip(rows.tolist(), cols.tolist())]


def row_extremes(points: Iterable[Point]) -> list[Point]:
    """Thin a point set to the leftmost/rightmost point of each row.

    Every extreme point of a set is the least or greatest x within its own
    row (anything else sits between two same-row points), so the convex hull
    of the thinned set is identical to the hull of the full set.
    """
    spans: dict[int, tuple[int, int]] = {}
    for x, y in points:
        lo_hi = spans.get(y)
        if lo_hi is None:
            spans[y] = (x, x)
        else:
            lo, hi = lo_hi
            spans[y] = (min(lo, x), max(hi, x))
    out = []
    for y in sorted(spans):
        lo, hi = spans[y]
        out.append(Point(lo, y))
        if hi != lo:
            out.append(Point(hi, y))
    return out


def jarvis_hull(points: Sequence[Point]) -> Hull:
    """Gift-wrap the convex hull of a point set.

    Starts at the greatest-x point (ties: greatest y) and repeatedly wraps to
    the candidate with no other point outside the tested edge, taking the
    farthest candidate when several are collinear so intermediate boundary
    points never become vertices. Duplicates are ignored. Degenerate inputs
    yield 1-vertex (single point) or 2-vertex (collinear) hulls.

    O(n*h) cross products for h hull vertices.
    """
    if not points:
        raise EmptyPointSet("cannot wrap an empty point set")
    distinct = sorted({Point(int(p[0]), int(p[1])) for p in points})
    start = max(distinct, key=lambda p: (p.x, p.y))
    if len(distinct) == 1:
        return Hull(vertices=(start,), source_count=len(points))

    hull = [start]
    p = start
    while True:
        q = next(r for r in distinct if r != p)
        for r in distinct:
            if r == p or r == q:
                continue
            c = _cross(p, q, r)
            if c > 0 or (c == 0 and _dist2(p, r) > _dist2(p, q)):
                q = r
        if q == start:
            break
        hull.append(q)
        p = q
        if len(hull) > len(distinct):
            raise RuntimeError("hull march failed to terminate")
    return Hull(vertices=tuple(hull), source_count=len(points))


def shoelace_area(polygon: Sequence[Point]) -> float:
    """Polygon area as half the absolute alternating cross-sum.

    Orientation-independent; fewer than 3 vertices (or collinear input)
    gives 0.
    """
    n = len(polygon)
    if n < 3:
        return 0.0
    acc = 0
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        acc += x1 * y2 - x2 * y1
    return abs(acc) / 2.0


def _row_span(vertices: Sequence[Point], y: int) -> Optional[tuple[int, int]]:
    """Inclusive integer x-range covered by a convex polygon on row y, if any."""
    lo = hi = None
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        if y1 == y2:
            if y1 != y:
                continue
            xs = (x1, x2)
        elif min(y1, y2) <= y <= max(y1, y2):
            # exact rational intersection of the edge with the row line
            xs = (Fraction(x1 * (y2 - y) + x2 * (y - y1), y2 - y1),)
        else:
            continue
        for x in xs:
            if lo is None or x < lo:
                lo = x
            if hi is None or x > hi:
                hi = x
    if lo is None:
        return None
    return math.ceil(lo), math.floor(hi)


def white_area_in_hull(hull: Hull, mask: BinaryImage) -> int:
    """Count mask pixels that are 255 and inside or on the hull polygon.

    Scanline fill with exact rational edge intersections: a lattice pixel on
    the boundary is always counted, matching a boundary-inclusive
    point-in-polygon test exactly.
    """
    vals = mask.values
    h, w = vals.shape
    verts = hull.vertices
    if len(verts) == 1:
        x, y = verts[0]
        return int(0 <= y < h and 0 <= x < w and vals[y, x] == 255)
    y_lo = max(min(p.y for p in verts), 0)
    y_hi = min(max(p.y for p in verts), h - 1)
    total = 0
    for y in range(y_lo, y_hi + 1):
        span = _row_span(verts, y)
        if span is None:
            continue
        lo, hi = max(span[0], 0), min(span[1], w - 1)
        if lo > hi:
            continue
        total += int(np.count_nonzero(vals[y, lo : hi + 1] == 255))
    return total


def hull_white_mask(hull: Hull, mask: BinaryImage) -> BinaryImage:
    """Image of the mask pixels counted by white_area_in_hull (debug output)."""
    vals = mask.values
    h, w = vals.shape
    out = np.zeros_like(vals)
    verts = hull.vertices
    if len(verts) == 1:
        x, y = verts[0]
        if 0 <= y < h and 0 <= x < w and vals[y, x] == 255:
            out[y, x] = 255
        return BinaryImage(width=mask.width, height=mask.height, values=out)
    y_lo = max(min(p.y for p in verts), 0)
    y_hi = min(max(p.y for p in verts), h - 1)
    for y in range(y_lo, y_hi + 1):
        span = _row_span(verts, y)
        if span is None:
            continue
        lo, hi = max(span[0], 0), min(span[1], w - 1)
        if lo > hi:
            continue
        row = vals[y, lo : hi + 1]
        out[y, lo : hi + 1] = np.where(row == 255, 255, 0)
    return BinaryImage(width=mask.width, height=mask.height, values=out)


def hull_extent(hull: Hull) -> float:
    """Euclidean distance between the lexicographically least and greatest vertices."""
    vmin = min(hull.vertices)
    vmax = max(hull.vertices)
    return math.dist(vmin, vmax)


def compute_features(hull: Hull, mask: BinaryImage) -> HullFeatures:
    """Bundle the area/ratio/extent features the classifier consumes."""
    total = shoelace_area(hull.vertices)
    white = white_area_in_hull(hull, mask)
    ratio = white / total if total > 0 else 0.0
    return HullFeatures(total_area=total, white_area=white, ratio=ratio, extent=hull_extent(hull))


def draw_polygon_outline(base: BinaryImage, vertices: Sequence[Point]) -> BinaryImage:
    """Copy of `base` with the closed polygon boundary rasterized at 255.

    Debug overlay helper (hull stage output); Bresenham lines, clipped to the
    image.
    """
    out = base.values.copy()
    h, w = out.shape

    def plot(x: int, y: int):
        if 0 <= y < h and 0 <= x < w:
            out[y, x] = 255

    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        dx = abs(x2 - x1)
        dy = -abs(y2 - y1)
        sx = 1 if x1 < x2 else -1
        sy = 1 if y1 < y2 else -1
        err = dx + dy
        x, y = x1, y1
        while True:
            plot(x, y)
            if x == x2 and y == y2:
                break
            e2 = 2 * err
            if e2 >= dy:
                err += dy
                x += sx
            if e2 <= dx:
                err += dx
                y += sy
    return BinaryImage(width=base.width, height=base.height, values=out)
