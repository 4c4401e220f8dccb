"""
Tests for the synthetic scene generator.
"""
from dataclasses import replace

import numpy as np
import pytest

from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import RoadClass, RoadSegment
from roadseg.synthdata.scene import (
    WIDTH_RANGES_M,
    area_average,
    generate_scene,
    load_scene,
    save_scene,
    scene_to_patch,
)


class TestGenerateScene:
    """Tests for generate_scene."""

    def test_same_seed_bit_identical(self):
        first = generate_scene(7, 48, n_timesteps=3, cloud_coverage=0.3)
        second = generate_scene(7, 48, n_timesteps=3, cloud_coverage=0.3)
        for name in ("full_bands", "half_bands", "sixth_bands"):
            assert getattr(first, name).tobytes() == (
                getattr(second, name).tobytes()
            )
        np.testing.assert_array_equal(first.cloud_masks, second.cloud_masks)
        assert [r.to_dict() for r in first.roads] == [
            r.to_dict() for r in second.roads
        ]

    def test_different_seeds_differ(self):
        first = generate_scene(1, 48, n_timesteps=1)
        second = generate_scene(2, 48, n_timesteps=1)
        assert not np.array_equal(first.full_bands, second.full_bands)

    def test_group_shapes(self):
        scene = generate_scene(0, 48, n_timesteps=4)
        assert scene.full_bands.shape == (4, 4, 48, 48)
        assert scene.half_bands.shape == (6, 4, 24, 24)
        assert scene.sixth_bands.shape == (3, 4, 8, 8)
        assert scene.cloud_masks.shape == (4, 48, 48)
        assert len(scene.timestamps) == 4

    def test_no_roads(self):
        scene = generate_scene(3, 48, n_timesteps=1, road_density=0.0)
        assert scene.roads == []
        assert scene_to_patch(scene).label.sum() == 0

    def test_full_cloud_coverage(self):
        coverage = [0.0, 1.0, 0.0]
        scene = generate_scene(3, 48, n_timesteps=3, cloud_coverage=coverage)
        assert scene.cloud_masks[1].all()
        assert not scene.cloud_masks[0].any()

    def test_cloud_fraction(self):
        """Test mask fractions within 2% of the request on 240 px."""
        scene = generate_scene(
            11, 240, n_timesteps=2, cloud_coverage=0.4, missing_rate=0.0
        )
        fractions = scene.cloud_masks.mean(axis=(1, 2))
        assert np.all(np.abs(fractions - 0.4) <= 0.02)

    def test_clean_timestep(self):
        scene = generate_scene(
            5, 48, n_timesteps=4, cloud_coverage=0.5, clean_timestep=2,
            missing_rate=1.0,
        )
        assert not scene.cloud_masks[2].any()
        assert not scene.missing_masks[2].any()
        assert scene.missing_masks[0].any()

    def test_missing_stripes_zero_the_bands(self):
        scene = generate_scene(
            9, 48, n_timesteps=2, missing_rate=1.0, noise_std=0.0
        )
        for t in range(2):
            mask = scene.missing_masks[t]
            assert mask.any()
            # stripes span whole columns
            assert (mask.all(axis=0) == mask.any(axis=0)).all()
            assert (scene.full_bands[:, t][:, mask] == 0.0).all()

    def test_area_average_consistency(self):
        """Test a 20 m pixel equals the mean of its four 10 m children."""
        scene = generate_scene(
            4, 48, n_timesteps=2, noise_std=0.0, keep_native=True
        )
        native_half = scene.native[4:10]
        children = native_half.reshape(6, 2, 24, 2, 24, 2).mean(axis=(3, 5))
        np.testing.assert_allclose(
            scene.half_bands, children, rtol=0.0, atol=1e-6
        )
        np.testing.assert_allclose(
            scene.sixth_bands, area_average(scene.native[10:], 6), atol=1e-6
        )

    def test_road_widths_by_class(self):
        scene = generate_scene(21, 240, n_timesteps=1, road_density=20.0)
        assert scene.roads
        for road in scene.roads:
            low, high = WIDTH_RANGES_M[road.road_class]
            assert low <= road.width_m <= high

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"size_px": 50},
            {"size_px": 48, "cloud_coverage": 1.5},
            {"size_px": 48, "road_density": -1.0},
            {"size_px": 48, "clean_timestep": 12},
        ],
    )
    def test_invalid_arguments(self, kwargs):
        with pytest.raises(InvalidArgumentError):
            generate_scene(0, n_timesteps=2, **kwargs)


class TestSceneToPatch:
    """Tests for scene_to_patch."""

    def setup_method(self):
        self.scene = generate_scene(
            6, 48, n_timesteps=1, road_density=0.0, noise_std=0.0
        )

    def test_label_shapes(self):
        assert scene_to_patch(self.scene, 5.0).label.shape == (96, 96)
        assert scene_to_patch(self.scene, 10.0).label.shape == (48, 48)

    def test_full_scale_patch_size(self):
        scene = generate_scene(6, 240, n_timesteps=1, road_density=0.0)
        assert scene_to_patch(scene, 5.0).label.shape == (480, 480)
        assert scene_to_patch(scene, 10.0).label.shape == (240, 240)

    def test_big_road_through_centre(self):
        """Test that a horizontal big road labels one row of 5 m pixels."""
        road = RoadSegment(
            [(0.0, 242.0), (480.0, 242.0)], RoadClass.BIG, 12.0
        )
        scene = replace(self.scene, roads=[road])
        label = scene_to_patch(scene, 5.0).label
        # (480 - 242) / 5 = 47.6
        assert (label[47] == RoadClass.BIG).all()
        assert np.count_nonzero(label) == 96

    def test_invalid_resolution(self):
        with pytest.raises(InvalidArgumentError):
            scene_to_patch(self.scene, 7.0)


class TestSceneStorage:
    def test_round_trip(self, tmp_path):
        scene = generate_scene(8, 48, n_timesteps=2, road_density=10.0)
        save_scene(tmp_path / "scene.rspc", scene)
        loaded = load_scene(tmp_path / "scene.rspc")
        np.testing.assert_array_equal(loaded.full_bands, scene.full_bands)
        np.testing.assert_array_equal(loaded.cloud_masks, scene.cloud_masks)
        assert loaded.seed == scene.seed
        assert loaded.timestamps == scene.timestamps
        assert [r.to_dict() for r in loaded.roads] == [
            r.to_dict() for r in scene.roads
        ]
