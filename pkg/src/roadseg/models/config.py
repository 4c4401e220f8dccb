"""
Model configuration and its JSON schema.
"""
from typing import Dict, List, Literal

from pydantic import BaseModel, Field, model_validator

from roadseg.core.bands import band_counts
from roadseg.core.errors import ConfigurationError

Variant = Literal["unet", "unet_plus", "unet_time_flat", "unet_time_3d"]

VARIANTS: List[str] = ["unet", "unet_plus", "unet_time_flat", "unet_time_3d"]
TEMPORAL_VARIANTS = ("unet_time_flat", "unet_time_3d")


class ModelConfig(BaseModel):
    """
    Architecture settings.

    depth is the number of 2x2 pooling steps; widths double per level
    starting from base_width.
    """
    variant: Variant = "unet_plus"
    depth: int = Field(default=4, ge=3)
    base_width: int = Field(default=64, ge=4)
    n_timesteps: int = Field(default=1, ge=1)
    band_counts: Dict[str, int] = Field(default_factory=band_counts)
    label_upscale: int = 2
    temporal_width_divisor: int = Field(default=4, ge=1)

    @model_validator(mode="after")
    def _check_variant(self) -> "ModelConfig":
        expected_upscale = 1 if self.variant == "unet" else 2
        if self.label_upscale != expected_upscale:
            raise ValueError(
                f"variant {self.variant} requires label_upscale="
                f"{expected_upscale}"
            )
        temporal = self.variant in TEMPORAL_VARIANTS
        if not temporal and self.n_timesteps != 1:
            raise ValueError(
                f"variant {self.variant} requires n_timesteps=1"
            )
        if temporal and self.n_timesteps < 3:
            raise ValueError(
                f"variant {self.variant} needs at least 3 timesteps"
            )
        if set(self.band_counts) != {"full", "half", "sixth"}:
            raise ValueError("band_counts needs full, half and sixth")
        if self.base_width % self.temporal_width_divisor:
            raise ValueError(
                "base_width must be divisible by temporal_width_divisor"
            )
        return self

    @classmethod
    def for_variant(cls, variant: str, **kwargs) -> "ModelConfig":
        """Config with the label upscale and timesteps a variant implies."""
        kwargs.setdefault("label_upscale", 1 if variant == "unet" else 2)
        if variant in TEMPORAL_VARIANTS:
            kwargs.setdefault("n_timesteps", 12)
        else:
            kwargs["n_timesteps"] = 1
        return build_config(variant=variant, **kwargs)

    @property
    def temporal(self) -> bool:
        return self.variant in TEMPORAL_VARIANTS

    @property
    def min_input_multiple(self) -> int:
        """Input side lengths must be a multiple of this many pixels."""
        multiple = 2**self.depth
        while multiple % 6:
            multiple += 2**self.depth
        return multiple

    def level_widths(self) -> List[int]:
        """Feature maps per level, level 0 to the bottleneck."""
        return [self.base_width * 2**level for level in range(self.depth + 1)]


def build_config(**kwargs) -> ModelConfig:
    """
    Validate settings into a ModelConfig.

    Raises:
        ConfigurationError: If the settings are inconsistent.
    """
    try:
        return ModelConfig(**kwargs)
    except ValueError as e:
        raise ConfigurationError(f"Invalid model config: {str(e)}")


def model_config_schema() -> Dict:
    """JSON schema for ModelConfig files."""
    return ModelConfig.model_json_schema()
