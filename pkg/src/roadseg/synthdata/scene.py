"""
Procedural multi-band, multi-resolution, multi-temporal scenes.

A scene is rendered natively on the 10 m grid for all 13 bands, then the
20 m and 60 m groups are area-averaged from that render. Roads are static
across acquisitions; clouds, missing-data stripes and a seasonal
brightness cycle change per acquisition.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import torch
import torch.nn.functional as F

from roadseg.core.bands import (
    ALL_BANDS,
    BAND_GROUPS,
    FULL_RESOLUTION_M,
    GROUP_FACTORS,
    default_timestamps,
)
from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import GeoExtent, PatchSample, RoadClass, RoadSegment
from roadseg.ingest.container import (
    json_to_tensor,
    read_container,
    tensor_to_json,
    write_container,
)
from roadseg.ingest.osm import BIG_HIGHWAY_TAGS, map_highway_tag
from roadseg.ingest.rasterize import rasterize_centerlines

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

WIDTH_RANGES_M: Dict[RoadClass, Tuple[float, float]] = {
    RoadClass.BIG: (8.0, 20.0),
    RoadClass.MEDIUM: (4.0, 8.0),
    RoadClass.SMALL: (1.0, 4.0),
}
CLASS_PROBABILITIES = {
    RoadClass.SMALL: 0.5,
    RoadClass.MEDIUM: 0.3,
    RoadClass.BIG: 0.2,
}
SMALL_HIGHWAY_TAGS = ("residential", "service", "track", "footway")

# Surface reflectance, one value per band in storage order
_BACKGROUND = np.array(
    [0.08, 0.10, 0.09, 0.30,
     0.14, 0.22, 0.26, 0.30, 0.20, 0.12,
     0.07, 0.05, 0.01],
)
_TEXTURE_GAIN = np.array(
    [0.03, 0.04, 0.05, 0.10,
     0.06, 0.08, 0.09, 0.10, 0.08, 0.06,
     0.02, 0.02, 0.005],
)
# Albedo bump of a fully covered pixel, per class and band
_ROAD_BUMP: Dict[RoadClass, np.ndarray] = {
    RoadClass.BIG: np.array(
        [0.30, 0.30, 0.32, 0.10, 0.26, 0.20, 0.18, 0.12, 0.22, 0.24,
         0.20, 0.10, 0.02]
    ),
    RoadClass.MEDIUM: np.array(
        [0.24, 0.25, 0.26, 0.06, 0.21, 0.16, 0.14, 0.09, 0.18, 0.20,
         0.16, 0.08, 0.02]
    ),
    RoadClass.SMALL: np.array(
        [0.18, 0.20, 0.20, 0.02, 0.16, 0.12, 0.10, 0.05, 0.14, 0.16,
         0.12, 0.06, 0.01]
    ),
}
CLOUD_BRIGHTNESS = 1.2
SEASONAL_AMPLITUDE = 0.2


@dataclass
class SyntheticScene:
    """
    A rendered scene with its ground-truth vectors.

    Band stacks are (B, T, H, W) per group; masks are (T, H, W) booleans
    on the 10 m grid.
    """
    full_bands: np.ndarray
    half_bands: np.ndarray
    sixth_bands: np.ndarray
    roads: List[RoadSegment]
    cloud_masks: np.ndarray
    missing_masks: np.ndarray
    seed: int
    timestamps: List[Tuple[int, int]]
    extent: GeoExtent
    tile_id: str = ""
    native: Optional[np.ndarray] = None

    @property
    def size_px(self) -> int:
        return self.full_bands.shape[-1]

    @property
    def n_timesteps(self) -> int:
        return self.full_bands.shape[1]


def _edge_point(rng: np.random.Generator, side: int, size_m: float):
    s = float(rng.uniform(0.0, size_m))
    return [(s, 0.0), (size_m, s), (s, size_m), (0.0, s)][side]


def _random_road(
    rng: np.random.Generator, size_m: float
) -> RoadSegment:
    classes = list(CLASS_PROBABILITIES)
    road_class = classes[
        rng.choice(len(classes), p=list(CLASS_PROBABILITIES.values()))
    ]
    if road_class == RoadClass.BIG:
        tag = str(rng.choice(sorted(BIG_HIGHWAY_TAGS)))
    elif road_class == RoadClass.MEDIUM:
        tag = "unclassified"
    else:
        tag = str(rng.choice(SMALL_HIGHWAY_TAGS))

    side_a = int(rng.integers(4))
    side_b = (side_a + int(rng.integers(1, 4))) % 4
    start = np.array(_edge_point(rng, side_a, size_m))
    end = np.array(_edge_point(rng, side_b, size_m))

    # random walk bridged to zero at both ends
    n_vertices = int(rng.integers(4, 9))
    steps = rng.normal(0.0, 1.0, n_vertices - 1)
    walk = np.concatenate([[0.0], np.cumsum(steps)])
    frac = np.linspace(0.0, 1.0, n_vertices)
    walk -= frac * walk[-1]
    direction = end - start
    length = float(np.linalg.norm(direction)) or 1.0
    normal = np.array([-direction[1], direction[0]]) / length
    jitter = 0.06 * length * walk / max(np.abs(walk).max(), 1e-9)
    points = start + frac[:, None] * direction + jitter[:, None] * normal
    points = np.clip(points, 0.0, size_m)

    low, high = WIDTH_RANGES_M[road_class]
    return RoadSegment(
        polyline=[(float(x), float(y)) for x, y in points],
        road_class=map_highway_tag(tag),
        width_m=float(rng.uniform(low, high)),
        highway=tag,
    )


def _smooth_field(
    rng: np.random.Generator, size_px: int, cells: int
) -> np.ndarray:
    """Low-frequency noise in roughly [-1, 1]."""
    coarse = torch.from_numpy(rng.standard_normal((1, 1, cells, cells)))
    field = F.interpolate(
        coarse, size=(size_px, size_px), mode="bicubic", align_corners=False
    )[0, 0].numpy()
    return field / max(np.abs(field).max(), 1e-9)


def _pixel_centers(size_px: int, extent: GeoExtent):
    offsets = (np.arange(size_px) + 0.5) * FULL_RESOLUTION_M
    xs = extent.xmin + offsets
    ys = extent.ymax - offsets
    return np.meshgrid(xs, ys)


def _segment_distance(px, py, a, b) -> np.ndarray:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.hypot(px - a[0], py - a[1])
    t = ((px - a[0]) * ab[0] + (py - a[1]) * ab[1]) / denom
    t = np.clip(t, 0.0, 1.0)
    return np.hypot(px - (a[0] + t * ab[0]), py - (a[1] + t * ab[1]))


def road_coverage(
    roads: Sequence[RoadSegment], size_px: int, extent: GeoExtent
) -> Dict[RoadClass, np.ndarray]:
    """
    Fraction of each 10 m pixel footprint covered by road, per class.

    Coverage is the overlap between the road strip of width w around the
    centerline and the pixel footprint, measured across the road.
    """
    px, py = _pixel_centers(size_px, extent)
    half_pixel = FULL_RESOLUTION_M / 2
    coverage = {
        cls: np.zeros((size_px, size_px)) for cls in WIDTH_RANGES_M
    }
    for road in roads:
        if road.road_class == RoadClass.NO_ROAD:
            continue
        pts = np.asarray(road.polyline, dtype=float)
        dist = np.full((size_px, size_px), np.inf)
        for a, b in zip(pts[:-1], pts[1:]):
            dist = np.minimum(dist, _segment_distance(px, py, a, b))
        half_width = road.width_m / 2
        upper = np.minimum(dist + half_width, half_pixel)
        lower = np.maximum(dist - half_width, -half_pixel)
        overlap = np.clip(upper - lower, 0.0, None) / FULL_RESOLUTION_M
        cls = RoadClass(road.road_class)
        coverage[cls] = np.maximum(coverage[cls], overlap)
    return coverage


def _cloud_mask(
    rng: np.random.Generator, size_px: int, fraction: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Gaussian blob field and the mask covering the requested fraction."""
    yy, xx = np.mgrid[0:size_px, 0:size_px].astype(float)
    field = np.zeros((size_px, size_px))
    for _ in range(int(rng.integers(4, 10))):
        cy, cx = rng.uniform(0, size_px, 2)
        sigma = rng.uniform(0.05, 0.25) * size_px
        field += np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * sigma**2))
    field += 1e-6 * rng.standard_normal(field.shape)
    if fraction <= 0.0:
        mask = np.zeros(field.shape, dtype=bool)
    elif fraction >= 1.0:
        mask = np.ones(field.shape, dtype=bool)
    else:
        mask = field > np.quantile(field, 1.0 - fraction)
    blob = (field - field.min()) / max(np.ptp(field), 1e-9)
    return blob, mask


def _missing_mask(
    rng: np.random.Generator, size_px: int, rate: float
) -> np.ndarray:
    """Zero-valued vertical stripes aligned to the 60 m grid."""
    mask = np.zeros((size_px, size_px), dtype=bool)
    if rng.random() >= rate:
        return mask
    step = GROUP_FACTORS["sixth"]
    for _ in range(int(rng.integers(1, 3))):
        width = int(rng.integers(1, 7)) * step
        start = int(rng.integers(0, size_px // step)) * step
        mask[:, start:start + width] = True
    return mask


def area_average(bands: np.ndarray, factor: int) -> np.ndarray:
    """Average non-overlapping factor x factor blocks of the last two axes."""
    if factor == 1:
        return bands.astype(np.float32)
    *lead, h, w = bands.shape
    blocks = bands.astype(np.float64).reshape(
        *lead, h // factor, factor, w // factor, factor
    )
    return blocks.mean(axis=(-3, -1)).astype(np.float32)


def _validate(
    size_px: int,
    n_timesteps: int,
    road_density: float,
    coverages: List[float],
) -> None:
    if size_px <= 0 or size_px % 12:
        raise InvalidArgumentError(
            f"size_px must be a positive multiple of 12, got {size_px}"
        )
    if n_timesteps < 1:
        raise InvalidArgumentError("n_timesteps must be at least 1")
    if road_density < 0:
        raise InvalidArgumentError("road_density must be non-negative")
    if len(coverages) != n_timesteps:
        raise InvalidArgumentError(
            f"{len(coverages)} cloud coverages for {n_timesteps} timesteps"
        )
    if any(not 0.0 <= c <= 1.0 for c in coverages):
        raise InvalidArgumentError(
            f"cloud_coverage must lie in [0, 1], got {coverages}"
        )


def generate_scene(
    seed: int,
    size_px: int,
    n_timesteps: int = 12,
    road_density: float = 1.0,
    cloud_coverage: Union[float, Sequence[float]] = 0.0,
    clean_timestep: Optional[int] = None,
    missing_rate: float = 0.25,
    noise_std: float = 0.01,
    keep_native: bool = False,
    tile_id: str = "",
) -> SyntheticScene:
    """
    Render a deterministic synthetic scene.

    Args:
        seed: 64-bit seed; equal seeds give bit-identical scenes
        size_px: Side length on the 10 m grid, a multiple of 12
        n_timesteps: Number of acquisitions
        road_density: Expected number of roads per square kilometre
        cloud_coverage: Cloud fraction, scalar or one per acquisition
        clean_timestep: Acquisition kept free of clouds and stripes
        missing_rate: Probability that an acquisition has data stripes
        noise_std: Sensor noise added after area-averaging
        keep_native: Retain the native 10 m render of all 13 bands

    Raises:
        InvalidArgumentError: For invalid size, density or coverage.
    """
    if np.isscalar(cloud_coverage):
        coverages = [float(cloud_coverage)] * n_timesteps
    else:
        coverages = [float(c) for c in cloud_coverage]
    _validate(size_px, n_timesteps, road_density, coverages)
    if not 0 <= seed < 2**64:
        raise InvalidArgumentError("seed must be a 64-bit unsigned integer")
    if clean_timestep is not None:
        if not 0 <= clean_timestep < n_timesteps:
            raise InvalidArgumentError(
                f"clean_timestep {clean_timestep} out of range"
            )
        coverages[clean_timestep] = 0.0

    road_rng, texture_rng, cloud_rng, noise_rng = [
        np.random.default_rng(s)
        for s in np.random.SeedSequence(seed).spawn(4)
    ]
    size_m = size_px * FULL_RESOLUTION_M
    extent = GeoExtent(0.0, 0.0, size_m, size_m)

    n_roads = int(road_rng.poisson(road_density * (size_m / 1000.0) ** 2))
    roads = [_random_road(road_rng, size_m) for _ in range(n_roads)]

    texture = _smooth_field(texture_rng, size_px, max(size_px // 24, 2))
    detail = _smooth_field(texture_rng, size_px, max(size_px // 6, 2))
    surface = (
        _BACKGROUND[:, None, None]
        + _TEXTURE_GAIN[:, None, None] * (0.7 * texture + 0.3 * detail)
    )
    coverage = road_coverage(roads, size_px, extent)
    roads_layer = sum(
        _ROAD_BUMP[cls][:, None, None] * cov[None]
        for cls, cov in coverage.items()
    )

    timestamps = default_timestamps()
    if n_timesteps <= len(timestamps):
        timestamps = timestamps[:n_timesteps]
    else:
        timestamps = [(2016 + i // 4, 3 * (i % 4 + 1))
                      for i in range(n_timesteps)]

    native = np.empty((len(ALL_BANDS), n_timesteps, size_px, size_px),
                      dtype=np.float32)
    cloud_masks = np.zeros((n_timesteps, size_px, size_px), dtype=bool)
    missing_masks = np.zeros_like(cloud_masks)
    for t, (_, month) in enumerate(timestamps):
        phase = 2 * np.pi * (month - 3) / 12
        season = 1.0 + SEASONAL_AMPLITUDE * np.sin(phase)
        image = season * surface + roads_layer
        blob, cloud = _cloud_mask(cloud_rng, size_px, coverages[t])
        image = image + cloud[None] * (CLOUD_BRIGHTNESS + 0.5 * blob[None])
        rate = 0.0 if t == clean_timestep else missing_rate
        missing = _missing_mask(cloud_rng, size_px, rate)
        image = np.where(missing[None], 0.0, image)
        native[:, t] = image
        cloud_masks[t] = cloud
        missing_masks[t] = missing

    groups = {}
    first = 0
    for name, bands in BAND_GROUPS.items():
        stack = native[first:first + len(bands)]
        first += len(bands)
        group = area_average(stack, GROUP_FACTORS[name])
        if noise_std > 0:
            group = group + noise_rng.normal(
                0.0, noise_std, group.shape
            ).astype(np.float32)
        groups[name] = group

    logger.debug(
        "Generated scene seed=%d size=%d roads=%d timesteps=%d",
        seed, size_px, n_roads, n_timesteps,
    )
    return SyntheticScene(
        full_bands=groups["full"],
        half_bands=groups["half"],
        sixth_bands=groups["sixth"],
        roads=roads,
        cloud_masks=cloud_masks,
        missing_masks=missing_masks,
        seed=seed,
        timestamps=timestamps,
        extent=extent,
        tile_id=tile_id or f"synthetic-{seed}",
        native=native if keep_native else None,
    )


def scene_to_patch(
    scene: SyntheticScene, label_resolution_m: float = 5.0
) -> PatchSample:
    """
    Label a scene with its rasterized centerlines.

    Raises:
        InvalidArgumentError: If the label resolution is not 10 m or 5 m.
    """
    upscale = FULL_RESOLUTION_M / label_resolution_m
    if label_resolution_m <= 0 or upscale not in (1.0, 2.0):
        raise InvalidArgumentError(
            f"Label resolution must be 10 or 5 m, got {label_resolution_m}"
        )
    label = rasterize_centerlines(
        scene.roads, label_resolution_m, scene.extent
    )
    return PatchSample(
        full_bands=scene.full_bands,
        half_bands=scene.half_bands,
        sixth_bands=scene.sixth_bands,
        timestamps=list(scene.timestamps),
        label=label,
        geo_extent=scene.extent,
        label_resolution_m=label_resolution_m,
        tile_id=scene.tile_id,
        metadata={"seed": int(scene.seed)},
    )


def save_scene(path: PathLike, scene: SyntheticScene) -> None:
    """Write a scene, including its road vectors, to a container."""
    meta = {
        "seed": int(scene.seed),
        "tile_id": scene.tile_id,
        "timestamps": [list(ts) for ts in scene.timestamps],
        "geo_extent": scene.extent.to_dict(),
        "roads": [road.to_dict() for road in scene.roads],
    }
    write_container(
        path,
        {
            "full": scene.full_bands,
            "half": scene.half_bands,
            "sixth": scene.sixth_bands,
            "cloud_masks": scene.cloud_masks.astype(np.uint8),
            "missing_masks": scene.missing_masks.astype(np.uint8),
            "meta": json_to_tensor(meta),
        },
    )


def load_scene(path: PathLike) -> SyntheticScene:
    """Read a scene written by save_scene."""
    container = read_container(path)
    meta = tensor_to_json(container["meta"])
    return SyntheticScene(
        full_bands=container["full"],
        half_bands=container["half"],
        sixth_bands=container["sixth"],
        roads=[RoadSegment.from_dict(r) for r in meta["roads"]],
        cloud_masks=container["cloud_masks"].astype(bool),
        missing_masks=container["missing_masks"].astype(bool),
        seed=int(meta["seed"]),
        timestamps=[tuple(ts) for ts in meta["timestamps"]],
        extent=GeoExtent.from_dict(meta["geo_extent"]),
        tile_id=meta.get("tile_id", ""),
    )
