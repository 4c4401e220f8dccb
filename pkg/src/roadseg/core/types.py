"""
Domain types shared across the pipeline.

Rasters are numpy arrays in row-major order with row 0 at the northern
edge of the extent. Band stacks are always stored as (B, T, H, W); a
single acquisition has T = 1.
"""
import json
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from roadseg.core.bands import BAND_GROUPS, FULL_RESOLUTION_M
from roadseg.core.errors import InvalidArgumentError, ShapeError


class RoadClass(IntEnum):
    """Ordinal road category."""
    NO_ROAD = 0
    SMALL = 1
    MEDIUM = 2
    BIG = 3


NUM_CLASSES = len(RoadClass)
ROAD_CLASSES: Tuple[RoadClass, ...] = (
    RoadClass.SMALL,
    RoadClass.MEDIUM,
    RoadClass.BIG,
)
CLASS_LABELS: Dict[RoadClass, str] = {
    RoadClass.SMALL: "small",
    RoadClass.MEDIUM: "medium",
    RoadClass.BIG: "big",
}


@dataclass(frozen=True)
class GeoExtent:
    """Axis-aligned rectangle in a planar CRS, coordinates in metres."""
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise InvalidArgumentError(f"Empty extent: {self}")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    def grid_shape(self, resolution_m: float) -> Tuple[int, int]:
        """
        Pixel grid (rows, cols) of the extent at a resolution.

        Raises:
            InvalidArgumentError: If the extent is not an integer multiple
                of the resolution.
        """
        if resolution_m <= 0:
            raise InvalidArgumentError(
                f"Resolution must be positive, got {resolution_m}"
            )
        rows = self.height / resolution_m
        cols = self.width / resolution_m
        if abs(rows - round(rows)) > 1e-6 or abs(cols - round(cols)) > 1e-6:
            raise InvalidArgumentError(
                f"Extent {self} is not a multiple of {resolution_m} m"
            )
        return int(round(rows)), int(round(cols))

    def window(
        self, row: int, col: int, rows: int, cols: int, resolution_m: float
    ) -> "GeoExtent":
        """Extent of a pixel window given in grid coordinates."""
        xmin = self.xmin + col * resolution_m
        ymax = self.ymax - row * resolution_m
        return GeoExtent(
            xmin, ymax - rows * resolution_m, xmin + cols * resolution_m, ymax
        )

    def to_dict(self) -> Dict[str, float]:
        return {
            "xmin": self.xmin,
            "ymin": self.ymin,
            "xmax": self.xmax,
            "ymax": self.ymax,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeoExtent":
        return cls(
            float(data["xmin"]),
            float(data["ymin"]),
            float(data["xmax"]),
            float(data["ymax"]),
        )


@dataclass
class RoadSegment:
    """A road centerline with its class and physical width."""
    polyline: List[Tuple[float, float]]
    road_class: RoadClass
    width_m: float
    highway: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "polyline": [[float(x), float(y)] for x, y in self.polyline],
            "road_class": int(self.road_class),
            "width_m": float(self.width_m),
            "highway": self.highway,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RoadSegment":
        return cls(
            polyline=[(float(x), float(y)) for x, y in data["polyline"]],
            road_class=RoadClass(int(data["road_class"])),
            width_m=float(data["width_m"]),
            highway=data.get("highway", ""),
        )


@dataclass
class OrdinalMask:
    """Cumulative binary encoding of a class raster, shape (c-1, H, W)."""
    bits: np.ndarray
    resolution_m: float = FULL_RESOLUTION_M

    def __post_init__(self):
        if self.bits.ndim != 3 or self.bits.shape[0] != NUM_CLASSES - 1:
            raise ShapeError(
                f"Ordinal mask needs {NUM_CLASSES - 1} channels, "
                f"got shape {self.bits.shape}"
            )
        if self.resolution_m <= 0:
            raise InvalidArgumentError("resolution_m must be positive")
        self.bits = self.bits.astype(np.uint8, copy=False)
        if self.bits.size and self.bits.max() > 1:
            raise InvalidArgumentError("Ordinal mask entries must be 0 or 1")


@dataclass
class PatchSample:
    """
    One training or inference instance.

    Attributes:
        full_bands: 10 m bands, (4, T, H, W)
        half_bands: 20 m bands, (6, T, H/2, W/2)
        sixth_bands: 60 m bands, (3, T, H/6, W/6)
        timestamps: (year, month) per acquisition, length T
        label: class-index raster, (H, W) or (2H, 2W); None at inference
        geo_extent: extent shared by every band group and the label
        label_resolution_m: ground resolution of the label raster
    """
    full_bands: np.ndarray
    half_bands: np.ndarray
    sixth_bands: np.ndarray
    timestamps: List[Tuple[int, int]]
    label: Optional[np.ndarray]
    geo_extent: GeoExtent
    label_resolution_m: float = FULL_RESOLUTION_M / 2
    tile_id: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        groups = {
            "full": (self.full_bands, 1),
            "half": (self.half_bands, 2),
            "sixth": (self.sixth_bands, 6),
        }
        _, t, h, w = self._group_shape("full", self.full_bands)
        if h % 6 or w % 6:
            raise ShapeError(f"Patch size {h}x{w} is not divisible by 6")
        for name, (bands, factor) in groups.items():
            nb, nt, gh, gw = self._group_shape(name, bands)
            if nb != len(BAND_GROUPS[name]):
                raise ShapeError(
                    f"Group '{name}' needs {len(BAND_GROUPS[name])} bands, "
                    f"got {nb}"
                )
            if nt != t or (gh, gw) != (h // factor, w // factor):
                raise ShapeError(
                    f"Group '{name}' has shape {bands.shape}, expected "
                    f"(*, {t}, {h // factor}, {w // factor})"
                )
        if len(self.timestamps) != t:
            raise ShapeError(
                f"{len(self.timestamps)} timestamps for {t} acquisitions"
            )
        if self.label is not None:
            upscale = self.label_upscale
            if self.label.shape != (h * upscale, w * upscale):
                raise ShapeError(
                    f"Label shape {self.label.shape} does not match "
                    f"{h}x{w} bands at {self.label_resolution_m} m"
                )
            if self.label.size and self.label.max() >= len(RoadClass):
                raise InvalidArgumentError("Label values must be in 0..3")

    @staticmethod
    def _group_shape(name: str, bands: np.ndarray) -> Tuple[int, ...]:
        if bands.ndim != 4:
            raise ShapeError(
                f"Group '{name}' must be (B, T, H, W), got {bands.shape}"
            )
        return tuple(bands.shape)

    @property
    def n_timesteps(self) -> int:
        return self.full_bands.shape[1]

    @property
    def size_px(self) -> Tuple[int, int]:
        return self.full_bands.shape[2], self.full_bands.shape[3]

    @property
    def label_upscale(self) -> int:
        return int(round(FULL_RESOLUTION_M / self.label_resolution_m))

    def bands(self, group: str) -> np.ndarray:
        return {
            "full": self.full_bands,
            "half": self.half_bands,
            "sixth": self.sixth_bands,
        }[group]

    def at_timestep(self, t: int) -> "PatchSample":
        """Single-acquisition view of the sample (T = 1)."""
        if not -self.n_timesteps <= t < self.n_timesteps:
            raise InvalidArgumentError(
                f"Timestep {t} out of range for {self.n_timesteps}"
            )
        sl = slice(t, t + 1) if t != -1 else slice(t, None)
        return replace(
            self,
            full_bands=self.full_bands[:, sl],
            half_bands=self.half_bands[:, sl],
            sixth_bands=self.sixth_bands[:, sl],
            timestamps=[self.timestamps[t]],
        )


class ClassScores(BaseModel):
    """Confusion counts and scores of one road class."""
    tp: int = Field(ge=0)
    fp: int = Field(ge=0)
    fn: int = Field(ge=0)
    precision: float = Field(ge=0.0, le=1.0)
    recall: float = Field(ge=0.0, le=1.0)
    f1: float = Field(ge=0.0, le=1.0)
    jaccard: float = Field(ge=0.0, le=1.0)


class MetricsReport(BaseModel):
    """Per-road-class scores computed over pooled pixels."""
    small: ClassScores
    medium: ClassScores
    big: ClassScores

    def per_class(self) -> Dict[str, ClassScores]:
        return {"small": self.small, "medium": self.medium, "big": self.big}

    @property
    def average_f1(self) -> float:
        """Average F1 over the road classes (background excluded)."""
        return (self.small.f1 + self.medium.f1 + self.big.f1) / 3.0

    def to_json(self) -> str:
        data = self.model_dump()
        data["average_f1"] = self.average_f1
        data["aggregation"] = "pooled-pixels"
        return json.dumps(data, indent=2)
