"""
Training data access: in-memory or on-disk patches as a torch Dataset.
"""
import logging
import os
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import torch
from torch.utils.data import DataLoader, Dataset

from roadseg.core.errors import ConfigurationError
from roadseg.core.types import PatchSample
from roadseg.ingest.storage import load_sample
from roadseg.models.config import ModelConfig
from roadseg.models.inputs import check_sample, model_inputs
from roadseg.training.augment import augment as augment_sample

logger = logging.getLogger(__name__)

SampleSource = Union[PatchSample, str, Path]


def num_workers() -> int:
    """Data-loader workers from ROADSEG_NUM_WORKERS (default 0)."""
    raw = os.getenv("ROADSEG_NUM_WORKERS", "0")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(
            f"ROADSEG_NUM_WORKERS must be an integer, got '{raw}'"
        )
    if value < 0:
        raise ConfigurationError("ROADSEG_NUM_WORKERS must be >= 0")
    return value


def split_train_val(
    n: int, val_fraction: float, seed: int
) -> Tuple[List[int], List[int]]:
    """
    Deterministic random patch-level split.

    Raises:
        ConfigurationError: If either side of the split would be empty.
    """
    n_val = int(round(n * val_fraction))
    if n == 0 or n_val == 0 or n_val >= n:
        raise ConfigurationError(
            f"Cannot split {n} patches with val_fraction={val_fraction} "
            f"into nonempty train and validation sets"
        )
    order = np.random.default_rng(seed).permutation(n)
    val = sorted(int(i) for i in order[:n_val])
    train = sorted(int(i) for i in order[n_val:])
    return train, val


class PatchDataset(Dataset):
    """
    Patches adapted to a model's inputs.

    Items are (inputs, label) with inputs a mapping of band group to
    float tensor and label a long tensor of class indices. When
    augmentation is on, every item draws its flips from an RNG derived
    from (seed, epoch, index), so worker count never changes the stream.
    """

    def __init__(
        self,
        sources: Sequence[SampleSource],
        config: ModelConfig,
        timestep: Optional[int] = None,
        augment: bool = False,
        seed: int = 0,
    ):
        self.sources = list(sources)
        self.config = config
        self.timestep = timestep
        self.augment = augment
        self.seed = seed
        self.epoch = 0

    def __len__(self) -> int:
        return len(self.sources)

    def set_epoch(self, epoch: int) -> None:
        self.epoch = epoch

    def sample(self, index: int) -> PatchSample:
        source = self.sources[index]
        if isinstance(source, PatchSample):
            sample = source
        else:
            sample = load_sample(source)
        if sample.label is None:
            raise ConfigurationError(f"Patch {index} has no label")
        if sample.label_upscale != self.config.label_upscale:
            raise ConfigurationError(
                f"Patch {index} has {sample.label_resolution_m} m labels, "
                f"{self.config.variant} predicts at "
                f"{10.0 / self.config.label_upscale} m"
            )
        check_sample(sample, self.config)
        return sample

    def item_rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.epoch, index])

    def __getitem__(
        self, index: int
    ) -> Tuple[Dict[str, torch.Tensor], torch.Tensor]:
        sample = self.sample(index)
        if self.augment:
            sample = augment_sample(sample, self.item_rng(index))
        inputs = model_inputs(sample, self.config, self.timestep)
        label = torch.from_numpy(np.array(sample.label, dtype=np.int64))
        return inputs, label


def make_loader(
    dataset: PatchDataset,
    batch_size: int,
    shuffle: bool,
    seed: int = 0,
) -> DataLoader:
    """DataLoader with a seeded shuffle and ROADSEG_NUM_WORKERS workers."""
    generator = torch.Generator()
    generator.manual_seed(seed)
    return DataLoader(
        dataset,
        batch_size=batch_size,
        shuffle=shuffle,
        num_workers=num_workers(),
        generator=generator,
    )
