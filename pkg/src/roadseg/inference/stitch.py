"""
Sliding-window prediction over scenes larger than one patch.

Windows are laid on a regular lattice (stride apart, optionally offset
by a grid origin) and clamped to the padded scene. Every output pixel is
taken from the window in which it lies most centrally, so with a stride
of half the patch the windows contribute their central crops and the
border windows their outer halves. The result does not depend on the
order in which windows finish.
"""
import logging
from dataclasses import replace
from typing import List, Optional, Tuple

import numpy as np
import torch

from roadseg.core.bands import FULL_RESOLUTION_M, GROUP_FACTORS
from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import NUM_CLASSES, PatchSample
from roadseg.inference.predict import (
    ModelSource,
    Prediction,
    classes_from_probs,
    predict_probs,
    resolve_model,
)
from roadseg.ingest.patches import CORNER_STEP, crop_patch
from roadseg.models.inputs import model_inputs, normalize_bands

logger = logging.getLogger(__name__)


def window_starts(
    length: int, patch: int, stride: int, origin: int = 0
) -> List[int]:
    """
    Lattice positions origin + k * stride clamped to [0, length - patch].
    """
    last = length - patch
    first = origin % stride
    starts = {0, last}
    starts.update(range(first, last + 1, stride))
    return sorted(s for s in starts if 0 <= s <= last)


def window_owners(length: int, starts: List[int], patch: int) -> np.ndarray:
    """
    Index of the window whose centre is nearest to each pixel centre;
    ties go to the earlier window.
    """
    centres = np.asarray(starts, dtype=np.float64) + patch / 2.0
    pixels = np.arange(length, dtype=np.float64) + 0.5
    distance = np.abs(pixels[:, None] - centres[None, :])
    return np.argmin(distance, axis=1)


def padded_length(length: int, patch: int, stride: int) -> int:
    """Smallest length >= length with (length - patch) a stride multiple."""
    steps = -(-(length - patch) // stride)
    return patch + steps * stride


def _pad_scene(scene: PatchSample, height: int, width: int) -> PatchSample:
    """Reflect-pad every band group on the bottom and right edges."""
    pad_rows = height - scene.size_px[0]
    pad_cols = width - scene.size_px[1]
    if pad_rows == 0 and pad_cols == 0:
        return scene
    groups = {}
    for group, factor in GROUP_FACTORS.items():
        groups[group] = np.pad(
            scene.bands(group),
            (
                (0, 0),
                (0, 0),
                (0, pad_rows // factor),
                (0, pad_cols // factor),
            ),
            mode="reflect",
        )
    extent = scene.geo_extent.window(
        0, 0, height, width, FULL_RESOLUTION_M
    )
    return replace(
        scene,
        full_bands=groups["full"],
        half_bands=groups["half"],
        sixth_bands=groups["sixth"],
        label=None,
        geo_extent=extent,
    )


def _normalize_scene(scene: PatchSample) -> PatchSample:
    return replace(
        scene,
        full_bands=normalize_bands(scene.full_bands),
        half_bands=normalize_bands(scene.half_bands),
        sixth_bands=normalize_bands(scene.sixth_bands),
    )


def _check_geometry(
    size: Tuple[int, int], patch: int, stride: int, origin: Tuple[int, int]
) -> None:
    if min(size) < patch:
        raise InvalidArgumentError(
            f"Scene {size[0]}x{size[1]} is smaller than one {patch} px patch"
        )
    if stride <= 0 or stride > patch or stride % CORNER_STEP:
        raise InvalidArgumentError(
            f"Stride must be a multiple of {CORNER_STEP} in (0, {patch}], "
            f"got {stride}"
        )
    if any(o % CORNER_STEP for o in origin):
        raise InvalidArgumentError(
            f"Grid origin {origin} is not on the {CORNER_STEP} px grid"
        )


def predict_scene(
    model: ModelSource,
    scene: PatchSample,
    patch_px: int,
    stride: Optional[int] = None,
    grid_origin: Tuple[int, int] = (0, 0),
    average: bool = False,
    timestep: Optional[int] = None,
    batch_size: int = 4,
    device: str = "cpu",
) -> Prediction:
    """
    Stitch window predictions into one scene-wide class raster.

    The scene is min-max normalized once as a whole, then reflect-padded
    on the bottom and right so that windows of patch_px tile it at the
    given stride (default patch_px / 2).

    Args:
        grid_origin: Lattice offset (rows, cols) in 10 m pixels
        average: Average probabilities of all covering windows instead
            of keeping the most central one

    Raises:
        InvalidArgumentError: If the scene is smaller than one patch or
            the stride or origin is off the 60 m grid.
    """
    net = resolve_model(model, device)
    stride = patch_px // 2 if stride is None else stride
    _check_geometry(scene.size_px, patch_px, stride, grid_origin)

    height, width = scene.size_px
    padded_h = padded_length(height, patch_px, stride)
    padded_w = padded_length(width, patch_px, stride)
    padded = _pad_scene(_normalize_scene(scene), padded_h, padded_w)

    row_starts = window_starts(padded_h, patch_px, stride, grid_origin[0])
    col_starts = window_starts(padded_w, patch_px, stride, grid_origin[1])
    windows = [(r, c) for r in row_starts for c in col_starts]
    logger.info(
        "Predicting %d windows (%dx%d grid) over a %dx%d scene",
        len(windows), len(row_starts), len(col_starts), height, width,
    )

    up = net.config.label_upscale
    size = patch_px * up
    probs = np.zeros(
        (NUM_CLASSES - 1, padded_h * up, padded_w * up), dtype=np.float32
    )
    weight = np.zeros((padded_h * up, padded_w * up), dtype=np.float32)
    row_owner = np.repeat(window_owners(padded_h, row_starts, patch_px), up)
    col_owner = np.repeat(window_owners(padded_w, col_starts, patch_px), up)

    for first in range(0, len(windows), batch_size):
        chunk = windows[first:first + batch_size]
        batch = [
            model_inputs(
                crop_patch(padded, r, c, patch_px),
                net.config,
                timestep,
                normalize=False,
            )
            for r, c in chunk
        ]
        outputs = predict_probs(
            net,
            {g: torch.stack([b[g] for b in batch]) for g in batch[0]},
        ).numpy()
        for (r, c), out in zip(chunk, outputs):
            i, j = row_starts.index(r), col_starts.index(c)
            rows = slice(r * up, r * up + size)
            cols = slice(c * up, c * up + size)
            if average:
                probs[:, rows, cols] += out
                weight[rows, cols] += 1.0
            else:
                owned = (row_owner[rows] == i)[:, None] & (
                    col_owner[cols] == j
                )[None, :]
                probs[:, rows, cols] = np.where(
                    owned[None], out, probs[:, rows, cols]
                )

    if average:
        probs = probs / weight[None]
    probs = np.ascontiguousarray(probs[:, : height * up, : width * up])
    return Prediction(
        classes=classes_from_probs(probs),
        probs=probs,
        resolution_m=FULL_RESOLUTION_M / up,
        geo_extent=scene.geo_extent,
    )
