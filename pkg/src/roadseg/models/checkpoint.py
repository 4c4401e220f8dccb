"""
Model checkpoints stored in the patch container format.

Tensor names:
    param/<name>        learnable parameters (f32)
    buffer/<name>       batch-norm statistics (f32, restored to their dtype)
    meta/model_config   ModelConfig as UTF-8 JSON (u8)
    meta/train_summary  optional training summary as UTF-8 JSON (u8)
"""
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import torch

from roadseg.core.errors import ConfigurationError, CorruptFileError
from roadseg.ingest.container import (
    json_to_tensor,
    read_container,
    write_container,
)
from roadseg.models.config import build_config
from roadseg.models.unet import RoadUNet, build_model

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CONFIG_TENSOR = "meta/model_config"
SUMMARY_TENSOR = "meta/train_summary"


def checkpoint_tensors(
    model: RoadUNet, summary: Optional[Dict[str, Any]] = None
) -> Dict[str, np.ndarray]:
    """Named container tensors for a model."""
    tensors: Dict[str, np.ndarray] = {}
    for name, param in model.named_parameters():
        tensors[f"param/{name}"] = (
            param.detach().cpu().numpy().astype(np.float32)
        )
    for name, buffer in model.named_buffers():
        tensors[f"buffer/{name}"] = (
            buffer.detach().cpu().numpy().astype(np.float32)
        )
    tensors[CONFIG_TENSOR] = json_to_tensor(model.config.model_dump())
    if summary is not None:
        tensors[SUMMARY_TENSOR] = json_to_tensor(summary)
    return tensors


def save_checkpoint(
    path: PathLike,
    model: RoadUNet,
    summary: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write model weights, statistics and config to path."""
    path = Path(path)
    write_container(path, checkpoint_tensors(model, summary))
    logger.info("Saved %s checkpoint to %s", model.config.variant, path)
    return path


def load_checkpoint(
    path: PathLike, device: str = "cpu"
) -> Tuple[RoadUNet, Dict[str, Any]]:
    """
    Rebuild a model from a checkpoint file, in eval mode.

    Returns:
        (model, training summary or {})

    Raises:
        CorruptFileError: If the file is not a valid checkpoint.
        ConfigurationError: If the stored config is inconsistent.
    """
    container = read_container(path)
    if CONFIG_TENSOR not in container:
        raise CorruptFileError("names", f"{path} holds no {CONFIG_TENSOR}")
    config = build_config(**container.json(CONFIG_TENSOR))
    model = build_model(config)

    state = {}
    params = dict(model.named_parameters())
    expected = model.state_dict()
    for name, reference in expected.items():
        key = (
            f"param/{name}"
            if name in params
            else f"buffer/{name}"
        )
        if key not in container:
            raise CorruptFileError("names", f"{path} is missing {key}")
        array = container[key]
        if tuple(array.shape) != tuple(reference.shape):
            raise ConfigurationError(
                f"Checkpoint tensor {key} has shape {array.shape}, model "
                f"expects {tuple(reference.shape)}"
            )
        state[name] = torch.from_numpy(np.array(array)).to(reference.dtype)
    model.load_state_dict(state)
    model.to(device)
    model.eval()

    summary = {}
    if SUMMARY_TENSOR in container:
        summary = container.json(SUMMARY_TENSOR)
    return model, summary
