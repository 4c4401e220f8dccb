"""
Adapt PatchSample band groups to the tensors a model variant expects.
"""
from typing import Dict, Optional

import numpy as np
import torch

from roadseg.core.errors import ConfigurationError
from roadseg.core.types import PatchSample
from roadseg.models.config import ModelConfig

GROUPS = ("full", "half", "sixth")


def normalize_bands(bands: np.ndarray) -> np.ndarray:
    """
    Instance min-max normalization per band and acquisition.

    Args:
        bands: Array of shape (B, T, H, W)

    Returns:
        float32 array in [0, 1]; constant planes map to 0
    """
    bands = np.asarray(bands, dtype=np.float32)
    low = bands.min(axis=(-2, -1), keepdims=True)
    high = bands.max(axis=(-2, -1), keepdims=True)
    span = high - low
    safe = np.where(span > 0, span, 1.0).astype(np.float32)
    return np.where(span > 0, (bands - low) / safe, 0.0).astype(np.float32)


def check_sample(sample: PatchSample, config: ModelConfig) -> None:
    """
    Verify a sample fits a model's shape contract.

    Raises:
        ConfigurationError: Naming the first offending band group.
    """
    for group in GROUPS:
        bands = sample.bands(group)
        if bands.shape[0] != config.band_counts[group]:
            raise ConfigurationError(
                f"Band group '{group}' has {bands.shape[0]} bands, model "
                f"expects {config.band_counts[group]}"
            )
        if config.temporal and bands.shape[1] != config.n_timesteps:
            raise ConfigurationError(
                f"Band group '{group}' has {bands.shape[1]} acquisitions, "
                f"model expects {config.n_timesteps}"
            )
    height, width = sample.size_px
    multiple = config.min_input_multiple
    if height % multiple or width % multiple:
        raise ConfigurationError(
            f"Band group 'full' is {height}x{width}, model needs a "
            f"multiple of {multiple}"
        )


def model_inputs(
    sample: PatchSample,
    config: ModelConfig,
    timestep: Optional[int] = None,
    normalize: bool = True,
) -> Dict[str, torch.Tensor]:
    """
    Unbatched input tensors for one sample.

    Single-acquisition variants read one timestep (the last one unless
    given); temporal variants read the whole sequence.

    Returns:
        Mapping group -> (B, H, W) or (B, T, H, W) float32 tensor
    """
    check_sample(sample, config)
    if not config.temporal:
        t = sample.n_timesteps - 1 if timestep is None else timestep
        sample = sample.at_timestep(t)

    inputs = {}
    for group in GROUPS:
        bands = sample.bands(group)
        bands = normalize_bands(bands) if normalize else bands
        array = np.array(bands, dtype=np.float32)
        if not config.temporal:
            array = array[:, 0]
        inputs[group] = torch.from_numpy(array)
    return inputs


def batch_inputs(
    samples, config: ModelConfig, timestep: Optional[int] = None
) -> Dict[str, torch.Tensor]:
    """Stack model_inputs of several samples along a new batch axis."""
    per_sample = [model_inputs(s, config, timestep) for s in samples]
    return {
        group: torch.stack([inputs[group] for inputs in per_sample])
        for group in GROUPS
    }
