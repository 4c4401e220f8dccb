"""
Single-patch prediction.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
import torch

from roadseg.core.bands import FULL_RESOLUTION_M
from roadseg.core.errors import CorruptFileError
from roadseg.core.ordinal import decode_ordinal_raster
from roadseg.core.types import GeoExtent, PatchSample
from roadseg.ingest.container import (
    json_to_tensor,
    read_container,
    write_container,
)
from roadseg.models.checkpoint import load_checkpoint
from roadseg.models.inputs import model_inputs
from roadseg.models.unet import RoadUNet

ModelSource = Union[RoadUNet, str, Path]

THRESHOLD = 0.5


@dataclass
class Prediction:
    """
    Attributes:
        classes: Class raster (uH, uW), uint8
        probs: Per-channel sigmoid outputs (c-1, uH, uW), float32
        resolution_m: Ground resolution of both rasters
    """
    classes: np.ndarray
    probs: np.ndarray
    resolution_m: float
    geo_extent: Optional[GeoExtent] = None


def resolve_model(model: ModelSource, device: str = "cpu") -> RoadUNet:
    """Accept a model or a checkpoint path; the result is in eval mode."""
    if isinstance(model, torch.nn.Module):
        model.eval()
        return model
    loaded, _ = load_checkpoint(model, device)
    return loaded


def classes_from_probs(probs: np.ndarray) -> np.ndarray:
    """Threshold at 0.5 and decode leading ones per pixel."""
    return decode_ordinal_raster(probs > THRESHOLD)


@torch.no_grad()
def predict_probs(
    model: RoadUNet, inputs: Dict[str, torch.Tensor]
) -> torch.Tensor:
    """Sigmoid outputs for batched inputs, computed in eval mode."""
    model.eval()
    device = next(model.parameters()).device
    inputs = {k: v.to(device) for k, v in inputs.items()}
    return torch.sigmoid(model(**inputs)).cpu()


def predict_patch(
    model: ModelSource,
    sample: PatchSample,
    timestep: Optional[int] = None,
    normalize: bool = True,
    device: str = "cpu",
) -> Prediction:
    """
    Predict the class raster of one patch.

    Args:
        model: A model or the path of its checkpoint
        sample: Patch matching the model's shape contract
        timestep: Acquisition used by single-frame variants (default last)
        normalize: Apply instance min-max normalization to the bands

    Raises:
        ConfigurationError: If the sample does not fit the model, naming
            the offending band group.
    """
    net = resolve_model(model, device)
    inputs = model_inputs(sample, net.config, timestep, normalize)
    probs = predict_probs(net, {k: v.unsqueeze(0) for k, v in inputs.items()})
    probs = probs[0].numpy().astype(np.float32)
    return Prediction(
        classes=classes_from_probs(probs),
        probs=probs,
        resolution_m=FULL_RESOLUTION_M / net.config.label_upscale,
        geo_extent=sample.geo_extent,
    )


def save_prediction(
    path: Union[str, Path],
    prediction: Prediction,
    truth: Optional[np.ndarray] = None,
) -> Path:
    """Store classes, probabilities and optionally the reference label."""
    tensors = {
        "classes": prediction.classes.astype(np.uint8),
        "probs": prediction.probs.astype(np.float32),
    }
    if truth is not None:
        tensors["label"] = np.asarray(truth, dtype=np.uint8)
    meta = {
        "resolution_m": prediction.resolution_m,
        "geo_extent": (
            prediction.geo_extent.to_dict() if prediction.geo_extent else None
        ),
    }
    tensors["meta"] = json_to_tensor(meta)
    write_container(path, tensors)
    return Path(path)


def load_prediction(
    path: Union[str, Path],
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Returns:
        (class raster, reference label or None)

    Raises:
        CorruptFileError: If the file holds no class raster.
    """
    container = read_container(path)
    if "classes" not in container:
        raise CorruptFileError("names", f"{path} holds no class raster")
    label = container["label"] if "label" in container else None
    return container["classes"], label
