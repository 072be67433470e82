import random

import numpy as np
import pytest

import oracles
import synth
from gesture_rps.errors import (
    DegenerateHistogram,
    DimensionMismatch,
    EmptyImage,
    ImageTooSmall,
)
from gesture_rps.imaging import (
    BinaryImage,
    Frame,
    GrayImage,
    Histogram,
    background_subtract,
    binarize,
    histogram,
    mask_and,
    otsu_threshold,
    sobel,
    to_grayscale,
)


def frame_of_pixel(r, g, b, a):
    return Frame.from_array(np.array([[[r, g, b, a]]], dtype=np.uint8))


class TestGrayscale:
    @pytest.mark.parametrize(
        "pixel,expected",
        [
            ((255, 255, 255, 255), 255),
            ((0, 0, 0, 0), 0),
            ((30, 60, 90, 255), 60),
            ((1, 2, 2, 255), 1),  # floor of 5/3
        ],
    )
    def test_single_pixel(self, pixel, expected):
        gray = to_grayscale(frame_of_pixel(*pixel))
        assert gray.values[0, 0] == expected

    def test_alpha_ignored(self):
        assert to_grayscale(frame_of_pixel(30, 60, 90, 7)).values[0, 0] == 60

    def test_bounds_and_gray_identity(self, rng):
        for _ in range(20):
            frame = synth.random_frame(rng)
            gray = to_grayscale(frame)
            assert gray.values.min() >= 0 and gray.values.max() <= 255
        level = np.full((4, 4, 4), 77, dtype=np.uint8)
        assert (to_grayscale(Frame.from_array(level)).values == 77).all()

    def test_pure(self, rng):
        frame = synth.random_frame(rng)
        first = to_grayscale(frame).values
        second = to_grayscale(frame).values
        assert np.array_equal(first, second)


class TestHistogram:
    def test_uniform(self):
        img = GrayImage.from_array(np.full((2, 2), 128, dtype=np.uint8))
        hist = histogram(img)
        assert hist.counts[128] == 4
        assert hist.total == 4
        assert hist.counts.sum() == 4

    def test_two_values(self):
        img = GrayImage.from_array(np.array([[0, 255]], dtype=np.uint8))
        hist = histogram(img)
        assert hist.counts[0] == 1 and hist.counts[255] == 1

    def test_matches_loop_count(self, rng):
        values = synth.random_gray_values(rng)
        hist = histogram(GrayImage.from_array(values))
        assert hist.total == 1024
        assert list(hist.counts) == oracles.histogram_counts(values)

    def test_empty_raises(self):
        with pytest.raises(EmptyImage):
            histogram(GrayImage.from_array(np.zeros((0, 0), dtype=np.uint8)))


class TestOtsu:
    def test_two_spikes_tie_takes_smallest(self):
        assert otsu_threshold(Histogram.from_mapping({0: 50, 255: 50})) == 1

    def test_small_histogram(self):
        # exhaustive search over the valid range [51, 200] finds equal
        # variance everywhere, so the smallest valid split wins
        assert otsu_threshold(Histogram.from_mapping({50: 3, 200: 1})) == 51
        assert oracles.otsu_exhaustive([3 if q == 50 else 1 if q == 200 else 0 for q in range(256)]) == 51

    def test_single_level_degenerate(self):
        with pytest.raises(DegenerateHistogram):
            otsu_threshold(Histogram.from_mapping({128: 100}))

    def test_matches_exhaustive_oracle_1000_trials(self):
        rng = random.Random(1234)
        for _ in range(1000):
            counts = synth.random_histogram(rng)
            hist = Histogram.from_mapping({i: c for i, c in enumerate(counts) if c})
            assert otsu_threshold(hist) == oracles.otsu_exhaustive(counts)

    def test_oracle_prefix_form_equals_literal_form(self):
        # guards the prefix-sum shortcut inside the exhaustive oracle
        rng = random.Random(5)
        for _ in range(20):
            counts = synth.random_histogram(rng)
            k = oracles.otsu_exhaustive(counts)
            for probe in {max(k - 1, 1), k, min(k + 1, 255)}:
                if sum(counts[:probe]) == 0 or sum(counts[probe:]) == 0:
                    continue
                direct = oracles.between_class_variance_fraction(counts, probe)
                best = oracles.between_class_variance_fraction(counts, k)
                assert best >= direct

    def test_weighted_means_recompose_to_total_mean(self):
        rng = random.Random(99)
        for _ in range(200):
            counts = synth.random_histogram(rng)
            valid, w0, w1, mu0, mu1, mu_t = oracles.class_stats(counts)
            lhs = (w0 * mu0 + w1 * mu1)[valid]
            assert np.allclose(lhs, mu_t, rtol=1e-9, atol=0)


class TestBinarize:
    def test_all_zero(self):
        img = GrayImage.from_array(np.zeros((2, 2), dtype=np.uint8))
        assert (binarize(img, 1).values == 0).all()

    def test_all_white(self):
        img = GrayImage.from_array(np.full((2, 2), 255, dtype=np.uint8))
        assert (binarize(img, 1).values == 255).all()

    def test_threshold_is_inclusive(self):
        img = GrayImage.from_array(np.array([[10, 100, 200]], dtype=np.uint8))
        assert list(binarize(img, 100).values[0]) == [0, 255, 255]

    def test_bad_level_rejected(self):
        img = GrayImage.from_array(np.zeros((1, 1), dtype=np.uint8))
        with pytest.raises(ValueError):
            binarize(img, 256)


class TestBackgroundSubtract:
    def test_identical_frames_blank(self, rng):
        frame = synth.random_frame(rng)
        assert (background_subtract(frame, frame, 1).values == 0).all()

    def test_sum_of_channel_deltas(self):
        first = frame_of_pixel(0, 0, 0, 255)
        current = frame_of_pixel(100, 50, 30, 255)
        assert background_subtract(first, current, 150).values[0, 0] == 255
        assert background_subtract(first, current, 200).values[0, 0] == 0

    def test_threshold_boundary_inclusive(self):
        first = frame_of_pixel(0, 0, 0, 255)
        current = frame_of_pixel(100, 50, 30, 255)
        assert background_subtract(first, current, 180).values[0, 0] == 255
        assert background_subtract(first, current, 181).values[0, 0] == 0

    def test_symmetric(self, rng):
        a = synth.random_frame(rng)
        b = synth.random_frame(rng)
        for k in (0, 1, 100, 765):
            assert np.array_equal(
                background_subtract(a, b, k).values, background_subtract(b, a, k).values
            )

    def test_dimension_mismatch(self):
        a = synth.solid_frame(width=4, height=4)
        b = synth.solid_frame(width=5, height=4)
        with pytest.raises(DimensionMismatch):
            background_subtract(a, b, 10)


class TestSobel:
    def test_constant_image_has_no_edges(self):
        img = GrayImage.from_array(np.full((8, 8), 99, dtype=np.uint8))
        assert (sobel(img).values == 0).all()

    def test_vertical_step(self):
        values = np.zeros((5, 5), dtype=np.uint8)
        values[:, 2:] = 255
        edges = sobel(GrayImage.from_array(values))
        # column left of the step: Gx = 4*255 = 1020, Gy = 0 -> clamps to 255
        assert (edges.values[1:-1, 1] == 255).all()
        # border row stays blank by construction
        assert (edges.values[0, :] == 0).all()

    def test_matches_naive_convolution(self, rng):
        for _ in range(10):
            values = synth.random_gray_values(rng)
            edges = sobel(GrayImage.from_array(values))
            assert np.array_equal(edges.values, oracles.sobel_naive(values))

    def test_binary_input_accepted(self):
        values = np.zeros((6, 6), dtype=np.uint8)
        values[2:4, 2:4] = 255
        edges = sobel(BinaryImage.from_array(values))
        assert np.array_equal(edges.values, oracles.sobel_naive(values))

    def test_too_small(self):
        with pytest.raises(ImageTooSmall):
            sobel(GrayImage.from_array(np.zeros((2, 5), dtype=np.uint8)))


class TestMaskAnd:
    def test_both_required(self):
        a = BinaryImage.from_array(np.array([[0, 255, 0, 255]], dtype=np.uint8))
        b = BinaryImage.from_array(np.array([[0, 0, 255, 255]], dtype=np.uint8))
        assert list(mask_and(a, b).values[0]) == [0, 0, 0, 255]


class TestInvariants:
    def test_inputs_are_immutable(self, rng):
        frame = synth.random_frame(rng)
        with pytest.raises(ValueError):
            frame.pixels[0, 0, 0] = 1

    def test_binary_image_rejects_other_values(self):
        with pytest.raises(ValueError):
            BinaryImage.from_array(np.array([[0, 7]], dtype=np.uint8))

    def test_out_of_range_channels_rejected(self):
        with pytest.raises(ValueError):
            GrayImage.from_array([[0, 300]])
        with pytest.raises(ValueError):
            GrayImage.from_array([[-1, 0]])

    def test_fractional_values_rejected(self):
        with pytest.raises(ValueError):
            GrayImage.from_array(np.array([[1.5, 2.0]]))

    def test_stages_are_deterministic(self, rng):
        a = synth.random_frame(rng)
        b = synth.random_frame(rng)
        one = background_subtract(a, b, 120)
        two = background_subtract(a, b, 120)
        assert np.array_equal(one.values, two.values)
        g1, g2 = to_grayscale(b), to_grayscale(b)
        assert np.array_equal(g1.values, g2.values)
        assert otsu_threshold(histogram(g1)) == otsu_threshold(histogram(g2))
