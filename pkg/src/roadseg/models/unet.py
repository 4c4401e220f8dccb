"""
U-Net family for ordinal road extraction.

All variants share one topology: an encoder of double convolutions with
2x2 max pooling and doubling widths, a decoder of pixel-shuffle
upsampling plus concatenated skips, and band injection at the level that
matches each group's resolution (10 m at the input, 20 m after the
first pool, 60 m resampled to quarter resolution after the second).

- unet: scores at input resolution
- unet_plus: one extra pixel-shuffle stage, scores at twice the input
  resolution
- unet_time_flat: unet_plus fed with all acquisitions stacked as channels
- unet_time_3d: unet_plus fed with per-group temporal fusion outputs
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import torch
import torch.nn as nn
import torch.nn.functional as F

from roadseg.core.errors import ConfigurationError, ShapeError
from roadseg.core.types import NUM_CLASSES
from roadseg.models.blocks import DoubleConv, PixelShuffleUp, TemporalFusion
from roadseg.models.config import ModelConfig

logger = logging.getLogger(__name__)

GROUP_FACTORS = {"full": 1, "half": 2, "sixth": 6}


@dataclass(frozen=True)
class ShapeContract:
    """Input shapes per band group and the score shape, without batch."""
    inputs: Dict[str, Tuple[int, ...]]
    output: Tuple[int, int, int]


def shape_contract(config: ModelConfig, size_px: int) -> ShapeContract:
    """Expected tensor shapes for a square input of size_px at 10 m."""
    inputs = {}
    for group, factor in GROUP_FACTORS.items():
        side = size_px // factor
        bands = config.band_counts[group]
        if config.temporal:
            inputs[group] = (bands, config.n_timesteps, side, side)
        else:
            inputs[group] = (bands, side, side)
    side = size_px * config.label_upscale
    return ShapeContract(inputs, (NUM_CLASSES - 1, side, side))


def fusion_key(group: str) -> str:
    """Module name of the temporal fusion stack for a band group."""
    return f"{group}_bands"


def injection_channels(config: ModelConfig) -> Dict[str, int]:
    """Channels each band group contributes at its injection point."""
    if config.variant == "unet_time_3d":
        return {group: config.base_width for group in GROUP_FACTORS}
    if config.variant == "unet_time_flat":
        return {
            group: count * config.n_timesteps
            for group, count in config.band_counts.items()
        }
    return dict(config.band_counts)


class RoadUNet(nn.Module):
    """Multi-resolution U-Net emitting c-1 raw ordinal scores per pixel."""

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        widths = config.level_widths()
        inject = injection_channels(config)

        # ModuleDict keys must not shadow Module attributes such as half()
        self.fusion = nn.ModuleDict()
        if config.variant == "unet_time_3d":
            for group, bands in config.band_counts.items():
                self.fusion[fusion_key(group)] = TemporalFusion(
                    bands,
                    config.n_timesteps,
                    config.base_width,
                    config.temporal_width_divisor,
                )

        encoder = [DoubleConv(inject["full"], widths[0])]
        extra = {1: inject["half"], 2: inject["sixth"]}
        for level in range(1, config.depth + 1):
            in_ch = widths[level - 1] + extra.get(level, 0)
            encoder.append(DoubleConv(in_ch, widths[level]))
        self.encoder = nn.ModuleList(encoder)
        self.pool = nn.MaxPool2d(2)

        self.upsample = nn.ModuleList()
        self.decoder = nn.ModuleList()
        for level in range(config.depth, 0, -1):
            self.upsample.append(
                PixelShuffleUp(widths[level], widths[level - 1])
            )
            self.decoder.append(
                DoubleConv(2 * widths[level - 1], widths[level - 1])
            )

        self.head = nn.Sequential()
        if config.label_upscale == 2:
            self.head = nn.Sequential(
                PixelShuffleUp(widths[0], widths[0]),
                DoubleConv(widths[0], widths[0]),
            )
        self.out = nn.Conv2d(widths[0], NUM_CLASSES - 1, kernel_size=1)

    def _check_inputs(self, groups: Dict[str, torch.Tensor]) -> None:
        config = self.config
        expected_dim = 5 if config.temporal else 4
        full = groups["full"]
        if full.dim() != expected_dim:
            raise ShapeError(
                f"Group 'full' must have {expected_dim} dims for "
                f"{config.variant}, got {tuple(full.shape)}"
            )
        height, width = full.shape[-2:]
        step = 2**config.depth
        if height % step or width % step or height % 6 or width % 6:
            raise ShapeError(
                f"Input {height}x{width} is not divisible by 2^depth="
                f"{step} and by 6"
            )
        for group, factor in GROUP_FACTORS.items():
            x = groups[group]
            expected = (
                config.band_counts[group],
                *((config.n_timesteps,) if config.temporal else ()),
                height // factor,
                width // factor,
            )
            if x.dim() != expected_dim or tuple(x.shape[1:]) != expected:
                raise ShapeError(
                    f"Group '{group}' expected (N, {expected}), "
                    f"got {tuple(x.shape)}"
                )

    def _prepare(
        self, groups: Dict[str, torch.Tensor]
    ) -> Dict[str, torch.Tensor]:
        if self.config.variant == "unet_time_3d":
            return {
                g: self.fusion[fusion_key(g)](x) for g, x in groups.items()
            }
        if self.config.variant == "unet_time_flat":
            return {
                g: x.reshape(x.shape[0], -1, *x.shape[-2:])
                for g, x in groups.items()
            }
        return groups

    def forward(
        self, full: torch.Tensor, half: torch.Tensor, sixth: torch.Tensor
    ) -> torch.Tensor:
        """
        Args:
            full: (N, 4, H, W), or (N, 4, T, H, W) for temporal variants
            half: 20 m bands at H/2 x W/2
            sixth: 60 m bands at H/6 x W/6

        Returns:
            Raw scores (N, c-1, u*H, u*W) with u the label upscale
        """
        groups = {"full": full, "half": half, "sixth": sixth}
        self._check_inputs(groups)
        groups = self._prepare(groups)
        height, width = groups["full"].shape[-2:]
        quarter = F.interpolate(
            groups["sixth"],
            size=(height // 4, width // 4),
            mode="bilinear",
            align_corners=False,
        )
        injected = {1: groups["half"], 2: quarter}

        skips = []
        x = groups["full"]
        for level, block in enumerate(self.encoder):
            if level > 0:
                x = self.pool(x)
            if level in injected:
                x = torch.cat([x, injected[level]], dim=1)
            x = block(x)
            skips.append(x)

        x = skips.pop()
        for up, block in zip(self.upsample, self.decoder):
            x = block(torch.cat([up(x), skips.pop()], dim=1))
        return self.out(self.head(x))


def build_unet_plus(config: ModelConfig) -> RoadUNet:
    """Single-acquisition model: baseline unet or super-resolved unet_plus."""
    if config.variant not in ("unet", "unet_plus"):
        raise ConfigurationError(
            f"build_unet_plus cannot build variant {config.variant}"
        )
    return RoadUNet(config)


def build_unet_time(config: ModelConfig) -> RoadUNet:
    """Sequence model: flat channel stacking or 3d temporal fusion."""
    if config.variant not in ("unet_time_flat", "unet_time_3d"):
        raise ConfigurationError(
            f"build_unet_time cannot build variant {config.variant}"
        )
    return RoadUNet(config)


def build_model(config: ModelConfig) -> RoadUNet:
    """Build the network a config describes."""
    if config.temporal:
        model = build_unet_time(config)
    else:
        model = build_unet_plus(config)
    logger.info(
        "Built %s (depth=%d, base_width=%d) with %d parameters",
        config.variant, config.depth, config.base_width,
        count_parameters(model),
    )
    return model


def count_parameters(model: nn.Module) -> int:
    """Number of learnable scalars."""
    return sum(p.numel() for p in model.parameters() if p.requires_grad)
