"""
Multi-resolution patch extraction from a labelled tile.
"""
import logging
from typing import List, Tuple

import numpy as np

from roadseg.core.bands import FULL_RESOLUTION_M, GROUP_FACTORS
from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import PatchSample

logger = logging.getLogger(__name__)

# Window corners sit on the coarsest (60 m) grid so every group aligns
CORNER_STEP = GROUP_FACTORS["sixth"]


def sample_corners(
    tile_size: Tuple[int, int], patch_full_px: int, n: int, seed: int
) -> List[Tuple[int, int]]:
    """
    Draw n window corners uniformly, with replacement, among the corners
    on the 60 m grid that keep the window inside the tile.
    """
    height, width = tile_size
    if patch_full_px > height or patch_full_px > width:
        raise InvalidArgumentError(
            f"Tile {height}x{width} is smaller than the "
            f"{patch_full_px} px patch"
        )
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, (height - patch_full_px) // CORNER_STEP + 1, size=n)
    cols = rng.integers(0, (width - patch_full_px) // CORNER_STEP + 1, size=n)
    return [
        (int(r) * CORNER_STEP, int(c) * CORNER_STEP)
        for r, c in zip(rows, cols)
    ]


def crop_patch(
    tile: PatchSample, row: int, col: int, patch_full_px: int
) -> PatchSample:
    """Cut the aligned window with top-left corner (row, col) at 10 m."""
    if row % CORNER_STEP or col % CORNER_STEP:
        raise InvalidArgumentError(
            f"Corner ({row}, {col}) is not on the {CORNER_STEP} px grid"
        )
    windows = {}
    for group, factor in GROUP_FACTORS.items():
        r, c, size = row // factor, col // factor, patch_full_px // factor
        windows[group] = tile.bands(group)[:, :, r:r + size, c:c + size]
    label = None
    if tile.label is not None:
        up = tile.label_upscale
        label = tile.label[
            row * up:(row + patch_full_px) * up,
            col * up:(col + patch_full_px) * up,
        ]
    extent = tile.geo_extent.window(
        row, col, patch_full_px, patch_full_px, FULL_RESOLUTION_M
    )
    return PatchSample(
        full_bands=np.ascontiguousarray(windows["full"]),
        half_bands=np.ascontiguousarray(windows["half"]),
        sixth_bands=np.ascontiguousarray(windows["sixth"]),
        timestamps=list(tile.timestamps),
        label=None if label is None else np.ascontiguousarray(label),
        geo_extent=extent,
        label_resolution_m=tile.label_resolution_m,
        tile_id=tile.tile_id,
        metadata={"corner": [row, col]},
    )


def extract_patches(
    tile: PatchSample, n: int, patch_full_px: int = 240, seed: int = 0
) -> List[PatchSample]:
    """
    Extract n random aligned patches from a tile.

    Each patch carries windows of patch_full_px at 10 m, half that at
    20 m, a sixth at 60 m and the matching label window at the tile's
    label resolution. Deterministic for a given seed.

    Raises:
        InvalidArgumentError: If the patch size is not a multiple of 12
            or the tile is smaller than one patch.
    """
    if patch_full_px <= 0 or patch_full_px % 12:
        raise InvalidArgumentError(
            f"Patch size must be a positive multiple of 12, "
            f"got {patch_full_px}"
        )
    corners = sample_corners(tile.size_px, patch_full_px, n, seed)
    patches = [crop_patch(tile, r, c, patch_full_px) for r, c in corners]
    logger.info(
        "Extracted %d patches of %d px from tile '%s'",
        len(patches), patch_full_px, tile.tile_id,
    )
    return patches
