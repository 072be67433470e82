import math

import numpy as np
import pytest

import oracles
import synth
import gesture_rps.geometry as geo
from gesture_rps.errors import EmptyPointSet
from gesture_rps.geometry import (
    Hull,
    Point,
    compute_features,
    extract_points,
    hull_extent,
    hull_white_mask,
    jarvis_hull,
    row_extremes,
    shoelace_area,
    white_area_in_hull,
)
from gesture_rps.imaging import BinaryImage


def pts(*pairs):
    return [Point(x, y) for x, y in pairs]


def square_hull(side=10):
    return jarvis_hull(pts((0, 0), (side, 0), (side, side), (0, side)))


class TestExtractPoints:
    def test_blank(self):
        img = BinaryImage.from_array(np.zeros((3, 3), dtype=np.uint8))
        assert extract_points(img) == []

    def test_single(self):
        values = np.zeros((6, 6), dtype=np.uint8)
        values[4, 3] = 255
        assert extract_points(BinaryImage.from_array(values)) == [Point(3, 4)]

    def test_checkerboard_row_major(self):
        values = np.zeros((4, 4), dtype=np.uint8)
        values[(np.arange(4)[:, None] + np.arange(4)[None, :]) % 2 == 0] = 255
        points = extract_points(BinaryImage.from_array(values))
        assert points == pts(
            (0, 0), (2, 0), (1, 1), (3, 1), (0, 2), (2, 2), (1, 3), (3, 3)
        )


class TestJarvisHull:
    def test_triangle_is_its_own_hull(self):
        hull = jarvis_hull(pts((0, 0), (1, 0), (0, 1)))
        assert set(hull.vertices) == {(0, 0), (1, 0), (0, 1)}

    def test_interior_point_dropped(self):
        hull = jarvis_hull(pts((0, 0), (10, 0), (10, 10), (0, 10), (5, 5)))
        assert set(hull.vertices) == {(0, 0), (10, 0), (10, 10), (0, 10)}
        assert len(hull.vertices) == 4
        assert hull.source_count == 5

    def test_collinear_input_collapses_to_segment(self):
        hull = jarvis_hull(pts((0, 0), (1, 1), (2, 2), (3, 3)))
        assert hull.vertices == (Point(3, 3), Point(0, 0))

    def test_single_point(self):
        assert jarvis_hull(pts((4, 7))).vertices == (Point(4, 7),)

    def test_duplicates_ignored(self):
        hull = jarvis_hull(pts((0, 0), (0, 0), (1, 0), (0, 1)))
        assert set(hull.vertices) == {(0, 0), (1, 0), (0, 1)}
        assert hull.source_count == 4

    def test_start_vertex_rule(self):
        hull = jarvis_hull(pts((0, 0), (10, 0), (10, 10), (0, 10)))
        assert hull.vertices[0] == Point(10, 10)  # greatest x, then greatest y

    def test_edge_midpoints_excluded(self):
        corners = [(0, 0), (8, 0), (8, 8), (0, 8)]
        mids = [(4, 0), (8, 4), (4, 8), (0, 4)]
        hull = jarvis_hull(pts(*corners, *mids))
        assert set(hull.vertices) == set(corners)

    def test_empty_raises(self):
        with pytest.raises(EmptyPointSet):
            jarvis_hull([])

    def test_matches_extreme_point_oracle(self, rng):
        for _ in range(200):
            sample = synth.random_points(rng)
            hull = jarvis_hull(pts(*sample))
            assert set(map(tuple, hull.vertices)) == oracles.extreme_points(sample)

    def test_all_inputs_inside_hull(self, rng):
        for _ in range(100):
            sample = synth.random_points(rng)
            hull = jarvis_hull(pts(*sample))
            for x, y in sample:
                assert oracles.point_in_convex_polygon(hull.vertices, x, y)

    def test_winding_is_consistent(self, rng):
        for _ in range(100):
            sample = synth.random_points(rng)
            verts = jarvis_hull(pts(*sample)).vertices
            if len(verts) < 3:
                continue
            n = len(verts)
            for i in range(n):
                c = geo._cross(verts[i], verts[(i + 1) % n], verts[(i + 2) % n])
                assert c < 0  # strictly convex: no collinear vertices kept

    def test_march_cost_bounded_by_n_times_h(self, rng, monkeypatch):
        calls = {"n": 0}
        real = geo._cross

        def counting(o, a, b):
            calls["n"] += 1
            return real(o, a, b)

        monkeypatch.setattr(geo, "_cross", counting)
        for _ in range(50):
            sample = synth.random_points(rng)
            calls["n"] = 0
            hull = geo.jarvis_hull(pts(*sample))
            n = len(set(sample))
            h = len(hull.vertices)
            assert calls["n"] <= 3 * n * h + 3 * n

    def test_oracle_agrees_with_naive_definition_on_small_sets(self, rng):
        # guards the faster halfplane oracle with the literal
        # convex-combination definition
        for _ in range(60):
            sample = synth.random_points(rng, max_points=10, span=8)
            distinct = sorted(set(sample))
            fast = oracles.extreme_points(sample)
            for p in distinct:
                others = [q for q in distinct if q != p]
                naive_vertex = not oracles.in_convex_combination_naive(p, others) if others else True
                assert (p in fast) == naive_vertex


class TestRowExtremes:
    def test_hull_preserved(self, rng):
        for _ in range(100):
            sample = synth.random_points(rng)
            full = jarvis_hull(pts(*sample))
            thin = jarvis_hull(row_extremes(pts(*sample)))
            assert full.vertices == thin.vertices


class TestShoelace:
    def test_worked_triangle(self):
        assert shoelace_area(pts((2, 4), (3, -8), (1, 2))) == 7

    def test_unit_square(self):
        assert shoelace_area(pts((0, 0), (1, 0), (1, 1), (0, 1))) == 1

    def test_collinear_is_zero(self):
        assert shoelace_area(pts((0, 0), (1, 1), (2, 2))) == 0

    def test_degenerate_sizes(self):
        assert shoelace_area([]) == 0
        assert shoelace_area(pts((3, 3))) == 0
        assert shoelace_area(pts((0, 0), (5, 5))) == 0

    @pytest.mark.parametrize("side", range(1, 21))
    def test_squares(self, side):
        square = pts((0, 0), (side, 0), (side, side), (0, side))
        assert shoelace_area(square) == side * side

    def test_rotation_and_reversal_invariant(self, rng):
        for _ in range(50):
            verts = jarvis_hull(pts(*synth.random_points(rng))).vertices
            area = shoelace_area(verts)
            for shift in range(len(verts)):
                rotated = verts[shift:] + verts[:shift]
                assert shoelace_area(rotated) == area
            assert shoelace_area(tuple(reversed(verts))) == area

    def test_matches_fan_triangulation(self, rng):
        for _ in range(100):
            verts = jarvis_hull(pts(*synth.random_points(rng))).vertices
            assert shoelace_area(verts) == pytest.approx(
                oracles.fan_triangulation_area(verts), abs=1e-9
            )


def white_mask(width, height, fill=255):
    return BinaryImage.from_array(np.full((height, width), fill, dtype=np.uint8))


class TestWhiteArea:
    def test_square_over_all_white(self):
        hull = square_hull(10)
        mask = white_mask(12, 12)
        # 11 x 11 lattice points lie inside or on the 10x10 square
        assert white_area_in_hull(hull, mask) == 121

    def test_square_over_all_black(self):
        hull = square_hull(10)
        mask = white_mask(12, 12, fill=0)
        assert white_area_in_hull(hull, mask) == 0

    def test_half_white_split(self):
        hull = square_hull(10)
        values = np.zeros((12, 12), dtype=np.uint8)
        values[:, :6] = 255
        mask = BinaryImage.from_array(values)
        expected = oracles.white_area_pointwise(hull.vertices, values)
        assert expected == 66  # 6 white columns x 11 rows inside the square
        assert white_area_in_hull(hull, mask) == expected

    def test_matches_pointwise_oracle_on_random_hulls(self, rng):
        for _ in range(50):
            sample = synth.random_points(rng, span=30)
            hull = jarvis_hull(pts(*sample))
            gen = np.random.default_rng(rng.randrange(2**32))
            values = (gen.random((32, 32)) < 0.5).astype(np.uint8) * 255
            mask = BinaryImage.from_array(values)
            assert white_area_in_hull(hull, mask) == oracles.white_area_pointwise(
                hull.vertices, values
            )

    def test_never_exceeds_lattice_count(self, rng):
        all_white = white_mask(32, 32)
        for _ in range(30):
            hull = jarvis_hull(pts(*synth.random_points(rng, span=30)))
            lattice = oracles.white_area_pointwise(hull.vertices, all_white.values)
            gen = np.random.default_rng(rng.randrange(2**32))
            values = (gen.random((32, 32)) < 0.7).astype(np.uint8) * 255
            count = white_area_in_hull(hull, BinaryImage.from_array(values))
            assert count <= lattice

    def test_single_vertex_hull(self):
        hull = Hull(vertices=(Point(3, 4),), source_count=1)
        mask = white_mask(6, 6)
        assert white_area_in_hull(hull, mask) == 1

    def test_segment_hull_counts_lattice_points_on_it(self):
        hull = jarvis_hull(pts((0, 0), (4, 2)))
        mask = white_mask(6, 6)
        # only (0,0), (2,1), (4,2) are lattice points on that segment
        assert white_area_in_hull(hull, mask) == 3

    def test_mask_image_matches_count(self, rng):
        for _ in range(20):
            hull = jarvis_hull(pts(*synth.random_points(rng, span=30)))
            gen = np.random.default_rng(rng.randrange(2**32))
            values = (gen.random((32, 32)) < 0.5).astype(np.uint8) * 255
            mask = BinaryImage.from_array(values)
            img = hull_white_mask(hull, mask)
            assert int(np.count_nonzero(img.values == 255)) == white_area_in_hull(hull, mask)


class TestHullExtent:
    def test_single_vertex(self):
        assert hull_extent(Hull(vertices=(Point(5, 5),), source_count=1)) == 0

    def test_three_four_five(self):
        hull = jarvis_hull(pts((0, 0), (3, 4)))
        assert hull_extent(hull) == 5

    def test_matches_direct_min_max(self, rng):
        for _ in range(50):
            hull = jarvis_hull(pts(*synth.random_points(rng)))
            vmin = min(hull.vertices)
            vmax = max(hull.vertices)
            expected = math.hypot(vmax[0] - vmin[0], vmax[1] - vmin[1])
            assert hull_extent(hull) == pytest.approx(expected, abs=1e-12)


class TestComputeFeatures:
    def test_ratio_of_full_square(self):
        hull = square_hull(10)
        features = compute_features(hull, white_mask(12, 12))
        assert features.total_area == 100
        assert features.white_area == 121
        assert features.ratio == pytest.approx(1.21)
        assert features.extent == pytest.approx(math.hypot(10, 10))

    def test_degenerate_hull_gets_zero_ratio(self):
        hull = jarvis_hull(pts((0, 0), (4, 4)))
        features = compute_features(hull, white_mask(6, 6))
        assert features.total_area == 0
        assert features.ratio == 0.0
