# Network variants, building blocks and checkpoints
from roadseg.models.blocks import (
    DoubleConv,
    PixelShuffleUp,
    TemporalFusion,
    pixel_shuffle,
    pixel_unshuffle,
)
from roadseg.models.checkpoint import load_checkpoint, save_checkpoint
from roadseg.models.config import VARIANTS, ModelConfig, build_config
from roadseg.models.inputs import batch_inputs, model_inputs
from roadseg.models.unet import (
    RoadUNet,
    ShapeContract,
    build_model,
    build_unet_plus,
    build_unet_time,
    count_parameters,
    shape_contract,
)

__all__ = [
    "VARIANTS",
    "DoubleConv",
    "ModelConfig",
    "PixelShuffleUp",
    "RoadUNet",
    "ShapeContract",
    "TemporalFusion",
    "batch_inputs",
    "build_config",
    "build_model",
    "build_unet_plus",
    "build_unet_time",
    "count_parameters",
    "load_checkpoint",
    "model_inputs",
    "pixel_shuffle",
    "pixel_unshuffle",
    "save_checkpoint",
    "shape_contract",
]
