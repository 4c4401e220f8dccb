"""
Random flips and instance normalization for training samples.
"""
from dataclasses import replace

import numpy as np

from roadseg.core.types import PatchSample
from roadseg.models.inputs import normalize_bands


def flip(sample: PatchSample, axis: int) -> PatchSample:
    """Mirror every band group and the label along -1 (x) or -2 (y)."""
    label = sample.label
    if label is not None:
        label = np.flip(label, axis=axis).copy()
    return replace(
        sample,
        full_bands=np.flip(sample.full_bands, axis=axis).copy(),
        half_bands=np.flip(sample.half_bands, axis=axis).copy(),
        sixth_bands=np.flip(sample.sixth_bands, axis=axis).copy(),
        label=label,
    )


def normalize(sample: PatchSample) -> PatchSample:
    return replace(
        sample,
        full_bands=normalize_bands(sample.full_bands),
        half_bands=normalize_bands(sample.half_bands),
        sixth_bands=normalize_bands(sample.sixth_bands),
    )


def augment(sample: PatchSample, rng: np.random.Generator) -> PatchSample:
    """
    Horizontal and vertical flips, each with probability 0.5, followed by
    min-max normalization of every band.
    """
    if rng.random() < 0.5:
        sample = flip(sample, axis=-1)
    if rng.random() < 0.5:
        sample = flip(sample, axis=-2)
    return normalize(sample)
