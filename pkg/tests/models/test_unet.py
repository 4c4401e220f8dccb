"""
Tests for the U-Net variants.
"""
import pytest
import torch
import torch.nn as nn

from roadseg.core.errors import ConfigurationError, ShapeError
from roadseg.models.config import VARIANTS, ModelConfig, build_config
from roadseg.models.unet import (
    build_model,
    build_unet_plus,
    build_unet_time,
    count_parameters,
    fusion_key,
    injection_channels,
    shape_contract,
)
from tests.samples import tiny_config, tiny_model


def _random_inputs(config: ModelConfig, size: int, batch: int = 1):
    contract = shape_contract(config, size)
    return {
        group: torch.randn(batch, *shape)
        for group, shape in contract.inputs.items()
    }


class TestModelConfig:
    """Tests for ModelConfig invariants."""

    def test_variant_defaults(self):
        assert ModelConfig.for_variant("unet").label_upscale == 1
        assert ModelConfig.for_variant("unet_plus").label_upscale == 2
        time_config = ModelConfig.for_variant("unet_time_3d")
        assert time_config.n_timesteps == 12
        assert time_config.label_upscale == 2

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"variant": "unet", "label_upscale": 2},
            {"variant": "unet_plus", "n_timesteps": 12},
            {"variant": "unet_time_flat", "n_timesteps": 2},
            {"variant": "unet_plus", "depth": 2},
            {"variant": "unet_plus", "base_width": 10},
            {"variant": "resnet"},
        ],
    )
    def test_inconsistent_configs(self, kwargs):
        with pytest.raises(ConfigurationError):
            build_config(**kwargs)

    def test_input_multiple(self):
        assert build_config(depth=3).min_input_multiple == 24
        assert build_config(depth=4).min_input_multiple == 48
        assert build_config(depth=5).min_input_multiple == 96

    def test_width_doubling(self):
        config = build_config(depth=5, base_width=64)
        assert config.level_widths() == [64, 128, 256, 512, 1024, 2048]
        assert 480 % config.min_input_multiple == 0


class TestShapeContract:
    """Tests for input and output shapes of every variant."""

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_contract_for_240_px(self, variant):
        config = ModelConfig.for_variant(variant, base_width=8)
        contract = shape_contract(config, 240)
        if config.temporal:
            assert contract.inputs["full"] == (4, 12, 240, 240)
            assert contract.inputs["half"] == (6, 12, 120, 120)
            assert contract.inputs["sixth"] == (3, 12, 40, 40)
        else:
            assert contract.inputs["full"] == (4, 240, 240)
            assert contract.inputs["half"] == (6, 120, 120)
            assert contract.inputs["sixth"] == (3, 40, 40)
        expected = 240 if variant == "unet" else 480
        assert contract.output == (3, expected, expected)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_forward_for_240_px(self, variant):
        """Test that each variant maps 240 px inputs to its score raster."""
        config = ModelConfig.for_variant(variant, base_width=8)
        model = build_model(config).eval()
        with torch.no_grad():
            scores = model(**_random_inputs(config, 240))
        assert scores.shape == (1, *shape_contract(config, 240).output)

    def test_bad_input_size(self):
        model = tiny_model()
        config = model.config
        inputs = _random_inputs(config, 24)
        inputs["full"] = torch.randn(1, 4, 36, 36)
        with pytest.raises(ShapeError):
            model(**inputs)

    def test_group_mismatch_names_group(self):
        model = tiny_model()
        inputs = _random_inputs(model.config, 48)
        inputs["half"] = torch.randn(1, 5, 24, 24)
        with pytest.raises(ShapeError, match="half"):
            model(**inputs)

    def test_injection_channels(self):
        flat = tiny_config("unet_time_flat")
        assert injection_channels(flat) == {"full": 12, "half": 18, "sixth": 9}
        fused = tiny_config("unet_time_3d")
        assert injection_channels(fused) == {"full": 8, "half": 8, "sixth": 8}
        assert injection_channels(tiny_config()) == {
            "full": 4, "half": 6, "sixth": 3,
        }


class TestBuilders:
    """Tests for the builder functions."""

    def test_builders_reject_other_variants(self):
        with pytest.raises(ConfigurationError):
            build_unet_plus(tiny_config("unet_time_3d"))
        with pytest.raises(ConfigurationError):
            build_unet_time(tiny_config("unet_plus"))

    def test_baseline_has_no_head(self):
        assert len(tiny_model("unet").head) == 0
        assert len(tiny_model("unet_plus").head) == 2

    def test_fusion_only_for_3d(self):
        assert set(tiny_model("unet_time_3d").fusion) == {
            "full_bands", "half_bands", "sixth_bands",
        }
        assert len(tiny_model("unet_time_flat").fusion) == 0

    def test_builds_temporal_fusion_variant(self):
        """Test the 3d variant builds for every group name."""
        model = build_unet_time(
            ModelConfig.for_variant("unet_time_3d", depth=3, base_width=8)
        )
        assert callable(model.half)
        assert count_parameters(model) > 0
        names = {
            name.split(".")[1]
            for name, _ in model.named_parameters()
            if name.startswith("fusion.")
        }
        assert names == {fusion_key(g) for g in ("full", "half", "sixth")}


class TestParameterCount:
    """Tests for count_parameters."""

    def test_single_conv(self):
        assert count_parameters(nn.Conv2d(4, 64, 3, padding=1)) == 2368

    def test_temporal_fusion_comparable_size(self):
        """Test the 3d variant stays within 5% of U-Net+ at default size."""
        plus = count_parameters(build_model(ModelConfig.for_variant(
            "unet_plus"
        )))
        fused = count_parameters(build_model(ModelConfig.for_variant(
            "unet_time_3d"
        )))
        assert abs(fused - plus) / plus < 0.05

    def test_quadratic_in_width(self):
        narrow = count_parameters(tiny_model(base_width=32))
        wide = count_parameters(tiny_model(base_width=64))
        assert 3.7 < wide / narrow < 4.05


class TestGradientFlow:
    """Tests that every parameter receives a gradient."""

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_all_parameters_get_gradients(self, variant):
        model = tiny_model(variant).eval()
        scores = model(**_random_inputs(model.config, 48, batch=2))
        scores.mean().backward()
        for name, param in model.named_parameters():
            assert param.grad is not None, name
            assert torch.isfinite(param.grad).all(), name
            assert param.grad.abs().sum() > 0, name


class TestShiftConsistency:
    """Tests translation equivariance away from the borders."""

    def test_interior_translates(self):
        """Test a 24 px input shift moves interior scores by 48 label px."""
        model = tiny_model("unet_plus").eval()
        scene = {
            "full": torch.randn(1, 4, 312, 312),
            "half": torch.randn(1, 6, 156, 156),
            "sixth": torch.randn(1, 3, 52, 52),
        }
        shift = 24
        factors = {"full": 1, "half": 2, "sixth": 6}

        def window(offset: int):
            return {
                group: x[
                    ...,
                    offset // factors[group]:(offset + 288) // factors[group],
                    offset // factors[group]:(offset + 288) // factors[group],
                ]
                for group, x in scene.items()
            }

        with torch.no_grad():
            first = model(**window(0))
            second = model(**window(shift))
        lo, hi = 104, 208
        torch.testing.assert_close(
            first[..., 2 * lo:2 * hi, 2 * lo:2 * hi],
            second[
                ...,
                2 * (lo - shift):2 * (hi - shift),
                2 * (lo - shift):2 * (hi - shift),
            ],
            atol=1e-4,
            rtol=0.0,
        )
