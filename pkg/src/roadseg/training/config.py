"""
Training hyperparameters.
"""
from pathlib import Path
from typing import Union

from pydantic import BaseModel, Field, ValidationError

from roadseg.core.errors import ConfigurationError


class TrainConfig(BaseModel):
    """
    Optimizer, schedule, loss and data split settings.

    The learning rate follows cosine annealing with warm restarts of
    length t0 * t_mult**i epochs; weight decay is decoupled (AdamW).
    """
    lr: float = Field(default=3e-4, ge=0.0)
    weight_decay: float = Field(default=5e-4, ge=0.0)
    beta_tversky: float = Field(default=0.7, gt=0.0, lt=1.0)
    epochs: int = Field(default=500, ge=0)
    t0: int = Field(default=1, ge=1)
    t_mult: int = Field(default=2, ge=1)
    val_fraction: float = Field(default=0.1, gt=0.0, lt=1.0)
    batch_size: int = Field(default=8, ge=1)
    seed: int = Field(default=0, ge=0)
    smooth_eps: float = Field(default=1e-6, ge=0.0)
    augment: bool = True
    timestep: int = -1


def build_train_config(**kwargs) -> TrainConfig:
    """
    Raises:
        ConfigurationError: If a value is out of range.
    """
    try:
        return TrainConfig(**kwargs)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid training config: {str(e)}")


def load_train_config(path: Union[str, Path]) -> TrainConfig:
    """Read a TrainConfig from a JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
        return TrainConfig.model_validate_json(text)
    except OSError as e:
        raise ConfigurationError(f"Cannot read {path}: {str(e)}")
    except ValidationError as e:
        raise ConfigurationError(f"Invalid training config: {str(e)}")
