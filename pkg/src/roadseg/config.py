"""
Run settings shared by the command line and the tool server.

Values are resolved in layers: model defaults, then a preset, then a
JSON config file, then explicit flags.
"""
import json
import logging
import os
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Literal,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from roadseg.core.errors import ConfigurationError
from roadseg.models.config import ModelConfig, Variant
from roadseg.training.config import TrainConfig, build_train_config

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Preset = Literal["desk", "full"]

DEFAULT_LOG_LEVEL = "WARNING"

# Index of the June 2018 acquisition in the default calendar
CLEAN_TIMESTEP = 9
# September 2018, the clouded acquisition of the shift protocol
SHIFT_TIMESTEP = 10

PRESETS: Dict[str, Dict[str, Any]] = {
    "desk": {
        "scenes": 4,
        "test_scenes": 1,
        "size": 480,
        "patch": 96,
        "patches_per_scene": 16,
        "epochs": 60,
        "base_width": 16,
        "depth": 4,
        "batch_size": 8,
        "road_density": 6.0,
        "cloud_coverage": 0.4,
    },
    "full": {
        "scenes": 5,
        "test_scenes": 1,
        "size": 10980,
        "patch": 240,
        "patches_per_scene": 1000,
        "epochs": 500,
        "base_width": 64,
        "depth": 4,
        "batch_size": 8,
        "road_density": 1.0,
        "cloud_coverage": 0.4,
    },
}


class RunSettings(BaseModel):
    """Every pipeline setting that a flag or config file can set."""
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(default=0, ge=0)
    out: Optional[str] = None
    checkpoint: Optional[str] = None
    variant: Variant = "unet_plus"
    preset: Optional[Preset] = None

    # data
    scenes: int = Field(default=4, ge=1)
    test_scenes: int = Field(default=1, ge=0)
    size: int = Field(default=480, ge=12)
    timesteps: int = Field(default=12, ge=1)
    patch: int = Field(default=96, ge=12)
    patches_per_scene: int = Field(default=16, ge=1)
    road_density: float = Field(default=6.0, ge=0.0)
    cloud_coverage: float = Field(default=0.4, ge=0.0, le=1.0)
    label_resolution: float = 5.0

    # model
    depth: int = Field(default=4, ge=3)
    base_width: int = Field(default=16, ge=4)

    # training
    epochs: int = Field(default=60, ge=0)
    batch_size: int = Field(default=8, ge=1)
    lr: float = 3e-4
    weight_decay: float = 5e-4
    beta_tversky: float = 0.7
    val_fraction: float = 0.1

    # inputs and prediction
    manifest: Optional[str] = None
    split: str = "test"
    input_path: Optional[str] = None
    predictions: Optional[str] = None
    timestep: Optional[int] = None
    stride: Optional[int] = None
    grid_origin: Tuple[int, int] = (0, 0)
    average: bool = False
    rows: Optional[List[str]] = None

    device: str = Field(
        default_factory=lambda: os.getenv("ROADSEG_DEVICE", "cpu")
    )

    def model_settings(self, variant: Optional[str] = None) -> ModelConfig:
        """ModelConfig for a variant (default: the configured one)."""
        return ModelConfig.for_variant(
            variant or self.variant,
            depth=self.depth,
            base_width=self.base_width,
        )

    def train_settings(self, **overrides) -> TrainConfig:
        values = {
            "lr": self.lr,
            "weight_decay": self.weight_decay,
            "beta_tversky": self.beta_tversky,
            "epochs": self.epochs,
            "val_fraction": self.val_fraction,
            "batch_size": self.batch_size,
            "seed": self.seed,
        }
        values.update(overrides)
        return build_train_config(**values)


def read_config_file(path: PathLike) -> Dict[str, Any]:
    """
    Raises:
        ConfigurationError: If the file is unreadable or not a JSON object.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigurationError(f"Cannot read config {path}: {str(e)}")
    except ValueError as e:
        raise ConfigurationError(f"Config {path} is not JSON: {str(e)}")
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config {path} must hold a JSON object")
    return data


def resolve_settings(
    flags: Optional[Mapping[str, Any]] = None,
    config_path: Optional[PathLike] = None,
) -> RunSettings:
    """
    Merge preset < config file < flags into validated settings.

    Flags whose value is None count as unset.

    Raises:
        ConfigurationError: For unknown keys or invalid values.
    """
    flags = {k: v for k, v in (flags or {}).items() if v is not None}
    from_file = read_config_file(config_path) if config_path else {}
    preset = flags.get("preset", from_file.get("preset"))

    values: Dict[str, Any] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(
                f"Unknown preset '{preset}'; choose from {sorted(PRESETS)}"
            )
        values.update(PRESETS[preset])
    values.update(from_file)
    values.update(flags)
    try:
        settings = RunSettings(**values)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid settings: {str(e)}")
    logger.debug("Resolved settings: %s", settings.model_dump())
    return settings


def clean_timestep(timesteps: int) -> Optional[int]:
    """The June acquisition when the sequence reaches it, else None."""
    return CLEAN_TIMESTEP if timesteps > CLEAN_TIMESTEP else None


def log_level(verbosity: int = 0) -> int:
    """Level from -v flags, else ROADSEG_LOG_LEVEL, else WARNING."""
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO
    name = os.getenv("ROADSEG_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        logging.error(
            f"Invalid ROADSEG_LOG_LEVEL: {name}. Using {DEFAULT_LOG_LEVEL}"
        )
        return logging.WARNING
    return level
