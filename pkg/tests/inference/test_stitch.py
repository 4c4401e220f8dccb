"""
Tests for sliding-window scene prediction.
"""
import numpy as np
import pytest
import torch

from roadseg.core.errors import InvalidArgumentError
from roadseg.inference.predict import predict_patch
from roadseg.inference.stitch import (
    padded_length,
    predict_scene,
    window_owners,
    window_starts,
)
from roadseg.models.inputs import normalize_bands
from tests.inference.stubs import NeighbourhoodScores, PointwiseScores
from tests.samples import make_sample, tiny_model


def _pointwise_expected(scene):
    """Classes the pointwise stub assigns to a globally normalized scene."""
    band = normalize_bands(scene.full_bands)[0, -1]
    classes = (
        (band > 0.25).astype(np.uint8)
        + (band > 0.5)
        + (band > 0.75)
    )
    return np.repeat(np.repeat(classes, 2, axis=0), 2, axis=1)


class TestWindowLayout:
    """Tests for the window lattice."""

    def test_three_by_three_grid(self):
        assert window_starts(480, 240, 120) == [0, 120, 240]

    def test_origin_offsets_lattice(self):
        assert window_starts(480, 240, 120, origin=60) == [0, 60, 180, 240]
        assert window_starts(480, 240, 120, origin=120) == [0, 120, 240]

    def test_single_window(self):
        assert window_starts(240, 240, 120) == [0]

    def test_owners_pick_most_central_window(self):
        owners = window_owners(480, [0, 120, 240], 240)
        assert (owners[:180] == 0).all()
        assert (owners[180:300] == 1).all()
        assert (owners[300:] == 2).all()

    def test_padded_length(self):
        assert padded_length(480, 240, 120) == 480
        assert padded_length(492, 240, 120) == 600
        assert padded_length(240, 240, 120) == 240


class TestPredictScene:
    """Tests for predict_scene."""

    def test_single_window_matches_patch_prediction(self):
        model = tiny_model().eval()
        sample = make_sample(size=48, seed=1)
        scene = predict_scene(model, sample, patch_px=48)
        patch = predict_patch(model, sample)
        assert np.array_equal(scene.probs, patch.probs)
        assert np.array_equal(scene.classes, patch.classes)

    def test_pointwise_model_is_seamless(self):
        """Test windows reassemble exactly what a global pass gives."""
        scene = make_sample(size=120, label_upscale=None, seed=4)
        prediction = predict_scene(
            PointwiseScores(), scene, patch_px=48, stride=24
        )
        assert prediction.classes.shape == (240, 240)
        np.testing.assert_array_equal(
            prediction.classes, _pointwise_expected(scene)
        )

    def test_padding_for_ragged_scene(self):
        scene = make_sample(size=66, label_upscale=None, seed=5)
        prediction = predict_scene(
            PointwiseScores(), scene, patch_px=48, stride=24
        )
        assert prediction.classes.shape == (132, 132)
        np.testing.assert_array_equal(
            prediction.classes, _pointwise_expected(scene)
        )

    def test_averaging_pointwise(self):
        scene = make_sample(size=96, label_upscale=None, seed=6)
        averaged = predict_scene(
            PointwiseScores(), scene, patch_px=48, stride=24, average=True
        )
        central = predict_scene(
            PointwiseScores(), scene, patch_px=48, stride=24
        )
        np.testing.assert_allclose(averaged.probs, central.probs, atol=1e-6)

    def test_origin_shift_by_stride(self):
        """Test a whole-stride offset keeps the same lattice."""
        assert window_starts(96, 48, 24, origin=24) == window_starts(
            96, 48, 24
        )
        torch.manual_seed(1)
        model = tiny_model().eval()
        scene = make_sample(size=96, label_upscale=None, seed=7)
        default = predict_scene(model, scene, 48, stride=24)
        shifted = predict_scene(
            model, scene, 48, stride=24, grid_origin=(24, 48)
        )
        assert np.array_equal(default.probs, shifted.probs)

    @pytest.mark.parametrize("origin", [(12, 12), (12, 0), (0, 18)])
    def test_different_lattices_agree(self, origin):
        """Test offset window grids give the same map for a local model."""
        assert window_starts(96, 48, 24, origin=origin[0] or origin[1]) != (
            window_starts(96, 48, 24)
        )
        model = NeighbourhoodScores()
        scene = make_sample(size=96, label_upscale=None, seed=8)
        default = predict_scene(model, scene, 48, stride=24)
        shifted = predict_scene(
            model, scene, 48, stride=24, grid_origin=origin
        )
        assert np.array_equal(default.probs, shifted.probs)
        assert np.array_equal(default.classes, shifted.classes)

    def test_scene_smaller_than_patch(self):
        scene = make_sample(size=24, label_upscale=None)
        with pytest.raises(InvalidArgumentError):
            predict_scene(PointwiseScores(), scene, patch_px=48)

    @pytest.mark.parametrize(
        "stride,origin", [(20, (0, 0)), (0, (0, 0)), (24, (3, 0))]
    )
    def test_invalid_geometry(self, stride, origin):
        scene = make_sample(size=96, label_upscale=None)
        with pytest.raises(InvalidArgumentError):
            predict_scene(
                PointwiseScores(), scene, 48, stride=stride,
                grid_origin=origin,
            )
