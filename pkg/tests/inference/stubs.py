"""
Stand-in networks with known outputs for the inference tests.
"""
from typing import Optional

import torch
import torch.nn as nn
import torch.nn.functional as F

from tests.samples import tiny_config


class ConstantScores(nn.Module):
    """Emits the same three scores at every output pixel."""

    def __init__(self, scores, variant: str = "unet_plus"):
        super().__init__()
        self.config = tiny_config(variant)
        self.scores = nn.Parameter(
            torch.tensor(scores, dtype=torch.float32), requires_grad=False
        )

    def forward(self, full, half, sixth):
        n, _, h, w = full.shape
        up = self.config.label_upscale
        return self.scores.view(1, 3, 1, 1).expand(n, 3, h * up, w * up)


class PointwiseScores(nn.Module):
    """Scores depend only on the first 10 m band at the same pixel."""

    def __init__(self, scale: Optional[float] = 20.0):
        super().__init__()
        self.config = tiny_config("unet_plus")
        self.offsets = nn.Parameter(
            torch.tensor([0.25, 0.5, 0.75]), requires_grad=False
        )
        self.scale = scale

    def forward(self, full, half, sixth):
        scores = (full[:, :1] - self.offsets.view(1, 3, 1, 1)) * self.scale
        return F.interpolate(scores, scale_factor=2, mode="nearest")


class NeighbourhoodScores(PointwiseScores):
    """
    Scores from the zero-padded 3x3 mean of the first 10 m band, so
    every output depends on a one-pixel neighbourhood.
    """

    def forward(self, full, half, sixth):
        height, width = full.shape[-2:]
        band = F.pad(full[:, :1], (1, 1, 1, 1))
        total = torch.zeros_like(full[:, :1])
        for i in range(3):
            for j in range(3):
                total = total + band[..., i:i + height, j:j + width]
        scores = (total / 9.0 - self.offsets.view(1, 3, 1, 1)) * self.scale
        return F.interpolate(scores, scale_factor=2, mode="nearest")
