"""
Conversion between samples/scenes and patch containers.
"""
from pathlib import Path
from typing import Dict, Union

import numpy as np

from roadseg.core.errors import CorruptFileError
from roadseg.core.types import GeoExtent, PatchSample
from roadseg.ingest.container import (
    json_to_tensor,
    read_container,
    tensor_to_json,
    write_container,
)

PathLike = Union[str, Path]

BAND_TENSORS = ("full", "half", "sixth")


def sample_to_tensors(sample: PatchSample) -> Dict[str, np.ndarray]:
    """Named container tensors for a sample."""
    tensors: Dict[str, np.ndarray] = {
        name: np.asarray(sample.bands(name), dtype=np.float32)
        for name in BAND_TENSORS
    }
    if sample.label is not None:
        tensors["label"] = np.asarray(sample.label, dtype=np.uint8)
    meta = {
        "geo_extent": sample.geo_extent.to_dict(),
        "timestamps": [list(ts) for ts in sample.timestamps],
        "label_resolution_m": sample.label_resolution_m,
        "tile_id": sample.tile_id,
        "metadata": sample.metadata,
    }
    tensors["meta"] = json_to_tensor(meta)
    return tensors


def sample_from_tensors(tensors: Dict[str, np.ndarray]) -> PatchSample:
    """
    Rebuild a sample from container tensors.

    Raises:
        CorruptFileError: If a required tensor is missing.
    """
    missing = [n for n in (*BAND_TENSORS, "meta") if n not in tensors]
    if missing:
        raise CorruptFileError(
            "names", f"missing tensors: {', '.join(missing)}"
        )
    meta = tensor_to_json(tensors["meta"])
    return PatchSample(
        full_bands=tensors["full"],
        half_bands=tensors["half"],
        sixth_bands=tensors["sixth"],
        timestamps=[tuple(ts) for ts in meta["timestamps"]],
        label=tensors.get("label"),
        geo_extent=GeoExtent.from_dict(meta["geo_extent"]),
        label_resolution_m=float(meta["label_resolution_m"]),
        tile_id=meta.get("tile_id", ""),
        metadata=meta.get("metadata", {}),
    )


def save_sample(path: PathLike, sample: PatchSample) -> Path:
    """Write a sample to a container and return the file path."""
    path = Path(path)
    write_container(path, sample_to_tensors(sample))
    return path


def load_sample(path: PathLike) -> PatchSample:
    return sample_from_tensors(read_container(path).tensors)
