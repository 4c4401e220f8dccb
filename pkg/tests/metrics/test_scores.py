"""
Tests for confusion counts and scores.
"""
import numpy as np
import pytest

from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import ROAD_CLASSES, RoadClass
from roadseg.metrics.scores import (
    ClassCounts,
    class_scores,
    confusion_counts,
    evaluate_rasters,
    jaccard_from_f1,
    majority_downsample,
    pool_counts,
    resample_predictions_nearest,
    scores,
)


def _naive_counts(pred, truth):
    counts = {}
    for k in ROAD_CLASSES:
        tp = fp = fn = 0
        for p, t in zip(pred.ravel(), truth.ravel()):
            if p == k and t == k:
                tp += 1
            elif p == k:
                fp += 1
            elif t == k:
                fn += 1
        counts[k] = ClassCounts(tp, fp, fn)
    return counts


class TestConfusionCounts:
    """Tests for confusion_counts."""

    def test_hand_counted(self):
        truth = np.array([[1, 1], [0, 0]])
        pred = np.array([[1, 2], [0, 0]])
        counts = confusion_counts(pred, truth)
        assert counts[RoadClass.SMALL] == ClassCounts(tp=1, fp=0, fn=1)
        assert counts[RoadClass.MEDIUM] == ClassCounts(tp=0, fp=1, fn=0)
        assert counts[RoadClass.BIG] == ClassCounts()

    def test_perfect(self):
        raster = np.random.default_rng(0).integers(0, 4, (16, 16))
        for k, c in confusion_counts(raster, raster).items():
            assert c.fp == 0 and c.fn == 0

    def test_background_excluded(self):
        zeros = np.zeros((5, 5), dtype=np.uint8)
        counts = confusion_counts(zeros, zeros)
        assert set(counts) == set(ROAD_CLASSES)
        assert all(c == ClassCounts() for c in counts.values())

    def test_matches_pixel_loop(self):
        rng = np.random.default_rng(7)
        for size in (1, 3, 17, 64):
            pred = rng.integers(0, 4, (size, size))
            truth = rng.integers(0, 4, (size, size))
            assert confusion_counts(pred, truth) == _naive_counts(pred, truth)

    def test_shape_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            confusion_counts(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_value_range(self):
        with pytest.raises(InvalidArgumentError):
            confusion_counts(np.full((2, 2), 4), np.zeros((2, 2)))

    def test_pooling_sums(self):
        a = confusion_counts(np.array([[1]]), np.array([[1]]))
        b = confusion_counts(np.array([[1]]), np.array([[0]]))
        assert pool_counts([a, b])[RoadClass.SMALL] == ClassCounts(1, 1, 0)


class TestScores:
    """Tests for class_scores and scores."""

    def test_one_of_each(self):
        result = class_scores(ClassCounts(tp=1, fp=1, fn=1))
        assert result.precision == 0.5
        assert result.recall == 0.5
        assert result.f1 == 0.5
        assert result.jaccard == pytest.approx(1 / 3)

    def test_empty_counts_are_zero(self):
        result = class_scores(ClassCounts())
        assert (result.precision, result.recall, result.f1) == (0, 0, 0)
        assert result.jaccard == 0

    def test_jaccard_identity(self):
        assert jaccard_from_f1(0.585) == pytest.approx(0.414, abs=0.002)
        for counts in [(3, 1, 2), (10, 0, 5), (1, 7, 0)]:
            result = class_scores(ClassCounts(*counts))
            assert result.jaccard == pytest.approx(jaccard_from_f1(result.f1))

    def test_report(self):
        truth = np.array([[1, 2, 3, 0]])
        report = evaluate_rasters([truth, truth], [truth, truth])
        assert report.small.tp == 2
        assert report.average_f1 == 1.0
        empty = scores(pool_counts([]))
        assert empty.average_f1 == 0.0


class TestResampling:
    """Tests for the nearest upsampling used to compare resolutions."""

    def test_single_pixel(self):
        out = resample_predictions_nearest(np.array([[3]]))
        np.testing.assert_array_equal(out, np.full((2, 2), 3))

    def test_histogram_quadruples(self):
        pred = np.random.default_rng(1).integers(0, 4, (9, 7))
        out = resample_predictions_nearest(pred)
        np.testing.assert_array_equal(
            np.bincount(out.ravel(), minlength=4),
            4 * np.bincount(pred.ravel(), minlength=4),
        )

    def test_majority_inverts_upsampling(self):
        pred = np.random.default_rng(2).integers(0, 4, (6, 6))
        np.testing.assert_array_equal(
            majority_downsample(resample_predictions_nearest(pred)), pred
        )

    def test_majority_ties_go_up(self):
        block = np.array([[0, 0], [2, 2]])
        assert majority_downsample(block)[0, 0] == 2

    @pytest.mark.parametrize("factor", [1.5, 0, -2])
    def test_invalid_factor(self, factor):
        with pytest.raises(InvalidArgumentError):
            resample_predictions_nearest(np.zeros((2, 2)), factor)

    def test_majority_needs_whole_blocks(self):
        with pytest.raises(InvalidArgumentError):
            majority_downsample(np.zeros((3, 4)), 2)
