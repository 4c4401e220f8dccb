"""
Four-model comparison on synthetic scenes, plus the shift protocol.

Single-frame models train and test on the clean June 2018 acquisition.
The shift row reuses the U-Net+ trained on that frame but tests it on
the clouded September 2018 acquisition. Sequence models see all twelve
acquisitions, clouds included. Every model is scored on whole test
scenes with sliding-window stitching, pooled over pixels on the 5 m
grid; the 10 m baseline is nearest-upsampled first.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from roadseg.config import CLEAN_TIMESTEP, SHIFT_TIMESTEP, RunSettings
from roadseg.core.errors import ConfigurationError
from roadseg.core.types import MetricsReport, PatchSample
from roadseg.experiments.datasets import scene_seeds
from roadseg.inference.stitch import predict_scene
from roadseg.ingest.patches import extract_patches
from roadseg.metrics.scores import (
    evaluate_rasters,
    resample_predictions_nearest,
)
from roadseg.metrics.table import ReportRow, format_table
from roadseg.models.checkpoint import save_checkpoint
from roadseg.models.unet import RoadUNet, build_model
from roadseg.synthdata.scene import generate_scene, scene_to_patch
from roadseg.training.trainer import seed_everything, train

logger = logging.getLogger(__name__)

ROW_TITLES = {
    "unet": ("U-Net", False, "single"),
    "unet_plus": ("U-Net+", True, "single"),
    "unet_plus_shift": ("U-Net+ (shift)", True, "single, shifted"),
    "unet_time_flat": ("U-Net+Time (flat)", True, "stacked"),
    "unet_time_3d": ("U-Net+Time (3d)", True, "3d fusion"),
}


@dataclass
class ScenePatches:
    """Training patches at both label resolutions and whole test tiles."""
    fine: List[PatchSample] = field(default_factory=list)
    coarse: List[PatchSample] = field(default_factory=list)
    test: List[PatchSample] = field(default_factory=list)


@dataclass
class Comparison:
    rows: List[ReportRow]

    @property
    def table(self) -> str:
        return format_table(self.rows)

    def row(self, key: str) -> ReportRow:
        title = ROW_TITLES[key][0]
        return next(row for row in self.rows if row.model == title)

    def to_json(self) -> str:
        return json.dumps(
            {"rows": [row.to_dict() for row in self.rows]}, indent=2
        )


def build_patches(settings: RunSettings) -> ScenePatches:
    """Render scenes and cut the same patch windows at 5 m and 10 m."""
    if settings.timesteps != 12:
        raise ConfigurationError(
            "The comparison needs the 12-acquisition calendar"
        )
    if settings.test_scenes < 1:
        raise ConfigurationError("The comparison needs a test scene")
    total = settings.scenes + settings.test_scenes
    data = ScenePatches()
    for index, seed in enumerate(scene_seeds(settings.seed, total)):
        scene = generate_scene(
            seed,
            settings.size,
            n_timesteps=settings.timesteps,
            road_density=settings.road_density,
            cloud_coverage=settings.cloud_coverage,
            clean_timestep=CLEAN_TIMESTEP,
            tile_id=f"scene_{index:03d}",
        )
        fine = scene_to_patch(scene, 5.0)
        if index >= settings.scenes:
            data.test.append(fine)
            continue
        patch_seed = settings.seed + index
        data.fine.extend(
            extract_patches(
                fine, settings.patches_per_scene, settings.patch, patch_seed
            )
        )
        data.coarse.extend(
            extract_patches(
                scene_to_patch(scene, 10.0),
                settings.patches_per_scene,
                settings.patch,
                patch_seed,
            )
        )
    return data


def fit(
    settings: RunSettings,
    variant: str,
    samples: Sequence[PatchSample],
    timestep: int = -1,
) -> RoadUNet:
    """Train one variant from a seeded initialization."""
    seed_everything(settings.seed)
    model = build_model(settings.model_settings(variant))
    config = settings.train_settings(timestep=timestep)
    history = None
    if settings.out:
        history = Path(settings.out) / f"history_{variant}.csv"
    result = train(model, samples, config, settings.device, history)
    if settings.out:
        save_checkpoint(
            Path(settings.out) / f"{variant}.rspc",
            result.model,
            result.summary(),
        )
    return result.model


def evaluate_on_tiles(
    model: RoadUNet,
    tiles: Sequence[PatchSample],
    patch_px: int,
    timestep: Optional[int] = None,
    device: str = "cpu",
) -> MetricsReport:
    """
    Stitched predictions scored on each tile's label grid. Tiles no
    larger than one window are predicted as a single patch.
    """
    preds, truths = [], []
    for tile in tiles:
        window = min(patch_px, *tile.size_px)
        pred = predict_scene(
            model, tile, window, timestep=timestep, device=device
        ).classes
        factor = tile.label_upscale // model.config.label_upscale
        if factor > 1:
            pred = resample_predictions_nearest(pred, factor)
        preds.append(pred)
        truths.append(tile.label)
    return evaluate_rasters(preds, truths)


def run_comparison(
    settings: RunSettings, variants: Optional[Sequence[str]] = None
) -> Comparison:
    """
    Train and score the requested rows (default: all five) and write
    comparison.md / comparison.json under settings.out when set.
    """
    keys = list(variants or ROW_TITLES)
    unknown = [k for k in keys if k not in ROW_TITLES]
    if unknown:
        raise ConfigurationError(f"Unknown comparison rows: {unknown}")
    data = build_patches(settings)
    logger.info(
        "Comparison on %d training patches and %d test tiles",
        len(data.fine), len(data.test),
    )

    reports: Dict[str, MetricsReport] = {}

    def evaluate(model: RoadUNet, timestep: Optional[int]) -> MetricsReport:
        return evaluate_on_tiles(
            model, data.test, settings.patch, timestep, settings.device
        )

    if "unet" in keys:
        model = fit(settings, "unet", data.coarse, CLEAN_TIMESTEP)
        reports["unet"] = evaluate(model, CLEAN_TIMESTEP)
    if "unet_plus" in keys or "unet_plus_shift" in keys:
        model = fit(settings, "unet_plus", data.fine, CLEAN_TIMESTEP)
        if "unet_plus" in keys:
            reports["unet_plus"] = evaluate(model, CLEAN_TIMESTEP)
        if "unet_plus_shift" in keys:
            reports["unet_plus_shift"] = evaluate(model, SHIFT_TIMESTEP)
    for variant in ("unet_time_flat", "unet_time_3d"):
        if variant in keys:
            model = fit(settings, variant, data.fine)
            reports[variant] = evaluate(model, None)

    rows = []
    for key in keys:
        title, fine_labels, time_handling = ROW_TITLES[key]
        rows.append(ReportRow(title, fine_labels, time_handling, reports[key]))
    comparison = Comparison(rows)
    if settings.out:
        out = Path(settings.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "comparison.md").write_text(comparison.table + "\n")
        (out / "comparison.json").write_text(comparison.to_json() + "\n")
        logger.info("Wrote comparison tables to %s", out)
    return comparison
