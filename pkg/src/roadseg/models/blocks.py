"""
Building blocks: double convolution, pixel-shuffle upsampling and
temporal fusion of image sequences.
"""
import torch
import torch.nn as nn
import torch.nn.functional as F

from roadseg.core.errors import ShapeError


def pixel_shuffle(x: torch.Tensor, r: int = 2) -> torch.Tensor:
    """
    Rearrange (r^2 C, H, W) into (C, rH, rW):
    out[c, r*i + a, r*j + b] = in[c*r^2 + a*r + b, i, j].
    Accepts batched (N, r^2 C, H, W) input as well.
    """
    if x.dim() < 3 or x.shape[-3] % (r * r):
        raise ShapeError(
            f"Channel count of {tuple(x.shape)} is not divisible by {r * r}"
        )
    return F.pixel_shuffle(x, r)


def pixel_unshuffle(x: torch.Tensor, r: int = 2) -> torch.Tensor:
    """Exact inverse of pixel_shuffle."""
    if x.dim() < 3 or x.shape[-1] % r or x.shape[-2] % r:
        raise ShapeError(
            f"Spatial size of {tuple(x.shape)} is not divisible by {r}"
        )
    return F.pixel_unshuffle(x, r)


class DoubleConv(nn.Sequential):
    """Two [3x3 conv -> batch norm -> ReLU] stages, size preserving."""

    def __init__(self, in_ch: int, out_ch: int):
        super().__init__(
            nn.Conv2d(in_ch, out_ch, kernel_size=3, padding=1),
            nn.BatchNorm2d(out_ch, momentum=0.1),
            nn.ReLU(inplace=True),
            nn.Conv2d(out_ch, out_ch, kernel_size=3, padding=1),
            nn.BatchNorm2d(out_ch, momentum=0.1),
            nn.ReLU(inplace=True),
        )
        self.in_ch = in_ch
        self.out_ch = out_ch

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() not in (3, 4) or x.shape[-3] != self.in_ch:
            raise ShapeError(
                f"DoubleConv expects {self.in_ch} channels, "
                f"got shape {tuple(x.shape)}"
            )
        if x.dim() == 3:
            return super().forward(x.unsqueeze(0)).squeeze(0)
        return super().forward(x)


class PixelShuffleUp(nn.Module):
    """3x3 conv to r^2 * out_ch maps followed by a pixel shuffle."""

    def __init__(self, in_ch: int, out_ch: int, r: int = 2):
        super().__init__()
        self.r = r
        self.conv = nn.Conv2d(in_ch, out_ch * r * r, kernel_size=3, padding=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return pixel_shuffle(self.conv(x), self.r)


class TemporalFusion(nn.Module):
    """
    Collapse an image sequence of one band group into 2d feature maps.

    Two [3x3x3 conv -> batch norm -> ReLU] stages run over (T, H, W) with
    base_width / divisor channels, then time is folded into channels and
    a 1x1 conv aggregates to out_ch maps.
    """

    def __init__(
        self,
        in_bands: int,
        n_timesteps: int,
        out_ch: int,
        width_divisor: int = 4,
    ):
        super().__init__()
        if n_timesteps < 3:
            raise ShapeError(
                f"Temporal fusion needs at least 3 timesteps, "
                f"got {n_timesteps}"
            )
        self.in_bands = in_bands
        self.n_timesteps = n_timesteps
        self.hidden = max(out_ch // width_divisor, 1)
        self.volumetric = nn.Sequential(
            nn.Conv3d(in_bands, self.hidden, kernel_size=3, padding=1),
            nn.BatchNorm3d(self.hidden, momentum=0.1),
            nn.ReLU(inplace=True),
            nn.Conv3d(self.hidden, self.hidden, kernel_size=3, padding=1),
            nn.BatchNorm3d(self.hidden, momentum=0.1),
            nn.ReLU(inplace=True),
        )
        self.aggregate = nn.Conv2d(
            self.hidden * n_timesteps, out_ch, kernel_size=1
        )

    def volumetric_features(self, x: torch.Tensor) -> torch.Tensor:
        """(N, B, T, H, W) -> (N, hidden, T, H, W)."""
        return self.volumetric(x)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        unbatched = x.dim() == 4
        if unbatched:
            x = x.unsqueeze(0)
        if x.dim() != 5 or x.shape[1] != self.in_bands:
            raise ShapeError(
                f"Temporal fusion expects (N, {self.in_bands}, T, H, W), "
                f"got {tuple(x.shape)}"
            )
        if x.shape[2] != self.n_timesteps:
            raise ShapeError(
                f"Temporal fusion built for {self.n_timesteps} timesteps, "
                f"got {x.shape[2]}"
            )
        features = self.volumetric(x)
        n, c, t, h, w = features.shape
        fused = self.aggregate(features.reshape(n, c * t, h, w))
        return fused.squeeze(0) if unbatched else fused
