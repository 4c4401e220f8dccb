"""
Ordinal label codec.

A class k out of c ordered classes is represented by c-1 cumulative
binary targets: the first k are 1, the rest 0. Decoding counts the
leading ones, so a positive bit after a zero is ignored.
"""
from typing import Sequence, Union

import numpy as np
import torch

from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import NUM_CLASSES, OrdinalMask, RoadClass

ArrayLike = Union[np.ndarray, Sequence[int]]


def encode_ordinal(road_class: int) -> np.ndarray:
    """
    Encode a class index as a cumulative binary vector of length c-1.

    Raises:
        InvalidArgumentError: If the class is outside 0..c-1.
    """
    if isinstance(road_class, bool) or not 0 <= int(road_class) < NUM_CLASSES:
        raise InvalidArgumentError(
            f"Road class must be in 0..{NUM_CLASSES - 1}, got {road_class}"
        )
    if int(road_class) != road_class:
        raise InvalidArgumentError(
            f"Road class must be integral: {road_class}"
        )
    return (np.arange(NUM_CLASSES - 1) < int(road_class)).astype(np.uint8)


def decode_ordinal(bits: ArrayLike) -> RoadClass:
    """Decode a cumulative binary vector: number of leading ones."""
    values = np.asarray(bits)
    if values.shape != (NUM_CLASSES - 1,):
        raise InvalidArgumentError(
            f"Expected {NUM_CLASSES - 1} bits, got shape {values.shape}"
        )
    if not np.isin(values, (0, 1)).all():
        raise InvalidArgumentError(f"Bits must be 0 or 1, got {values}")
    return RoadClass(int(np.cumprod(values).sum()))


def encode_ordinal_raster(labels: np.ndarray) -> np.ndarray:
    """Class raster (H, W) -> cumulative bits (c-1, H, W), uint8."""
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= NUM_CLASSES):
        raise InvalidArgumentError("Label values must be in 0..3")
    thresholds = np.arange(NUM_CLASSES - 1).reshape(-1, 1, 1)
    return (labels[None, :, :] > thresholds).astype(np.uint8)


def decode_ordinal_raster(bits: np.ndarray) -> np.ndarray:
    """Cumulative bits (c-1, H, W) -> class raster (H, W), uint8."""
    bits = np.asarray(bits).astype(np.uint8)
    return np.cumprod(bits, axis=0).sum(axis=0).astype(np.uint8)


def ordinal_targets(labels: torch.Tensor) -> torch.Tensor:
    """
    Batched training targets built on the fly.

    Args:
        labels: Integer class rasters, shape (N, H, W)

    Returns:
        Float tensor of shape (N, c-1, H, W)
    """
    thresholds = torch.arange(NUM_CLASSES - 1, device=labels.device)
    return (labels.unsqueeze(1).long() > thresholds.view(1, -1, 1, 1)).float()


def decode_ordinal_tensor(bits: torch.Tensor) -> torch.Tensor:
    """Batched decode, (N, c-1, H, W) -> (N, H, W) class indices."""
    return torch.cumprod(bits.long(), dim=1).sum(dim=1)


def threshold_probs(
    probs: np.ndarray, t: float = 0.5, resolution_m: float = 5.0
) -> OrdinalMask:
    """
    Discretise per-channel probabilities; a bit is set iff prob > t.

    Raises:
        InvalidArgumentError: If t is not inside (0, 1).
    """
    if not 0.0 < t < 1.0:
        raise InvalidArgumentError(f"Threshold must be in (0, 1), got {t}")
    probs = np.asarray(probs)
    if probs.ndim == 1:
        probs = probs.reshape(-1, 1, 1)
    return OrdinalMask((probs > t).astype(np.uint8), resolution_m)
