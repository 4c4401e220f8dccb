"""
Dataset preparation on disk: synthetic scenes, then labelled patches.
"""
import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from roadseg.core.errors import ConfigurationError
from roadseg.core.types import PatchSample
from roadseg.ingest.container import read_container
from roadseg.ingest.manifest import DatasetManifest, ManifestEntry
from roadseg.ingest.patches import extract_patches
from roadseg.ingest.storage import load_sample, save_sample
from roadseg.synthdata.scene import (
    generate_scene,
    load_scene,
    save_scene,
    scene_to_patch,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MANIFEST_NAME = "manifest.json"


def scene_seeds(seed: int, count: int) -> List[int]:
    """Independent 64-bit scene seeds derived from one run seed."""
    state = np.random.SeedSequence(seed).generate_state(count, np.uint64)
    return [int(s) for s in state]


def generate_dataset(
    out: PathLike,
    seed: int,
    scenes: int,
    size: int,
    timesteps: int = 12,
    test_scenes: int = 0,
    road_density: float = 1.0,
    cloud_coverage: float = 0.0,
    clean_timestep: Optional[int] = None,
) -> DatasetManifest:
    """
    Write scenes/scene_NNN.rspc and a manifest; the last test_scenes
    scenes form the test split.
    """
    if scenes < 1:
        raise ConfigurationError("At least one training scene is required")
    out = Path(out)
    manifest = DatasetManifest()
    total = scenes + test_scenes
    for index, scene_seed in enumerate(scene_seeds(seed, total)):
        tile_id = f"scene_{index:03d}"
        scene = generate_scene(
            scene_seed,
            size,
            n_timesteps=timesteps,
            road_density=road_density,
            cloud_coverage=cloud_coverage,
            clean_timestep=clean_timestep,
            tile_id=tile_id,
        )
        relative = Path("scenes") / f"{tile_id}.rspc"
        save_scene(out / relative, scene)
        manifest.entries.append(
            ManifestEntry(
                path=str(relative),
                tile_id=tile_id,
                split="train" if index < scenes else "test",
                kind="scene",
            )
        )
    manifest.save(out / MANIFEST_NAME)
    logger.info("Generated %d scenes in %s", total, out)
    return DatasetManifest.load(out / MANIFEST_NAME)


def is_scene(path: PathLike) -> bool:
    """True for save_scene containers, which carry road vectors."""
    return "roads" in read_container(path).json("meta")


def load_labelled(path: PathLike, label_resolution_m: float) -> PatchSample:
    """A scene container rasterized at a resolution, or a patch as is."""
    if is_scene(path):
        return scene_to_patch(load_scene(path), label_resolution_m)
    return load_sample(path)


def ingest_dataset(
    manifest: DatasetManifest,
    out: PathLike,
    patch: int,
    patches_per_scene: int,
    seed: int = 0,
    label_resolution_m: float = 5.0,
) -> DatasetManifest:
    """
    Rasterize every scene's road vectors and cut random patches from
    training scenes; test scenes are kept whole as single samples.
    """
    out = Path(out)
    result = DatasetManifest()
    for number, entry in enumerate(manifest.entries):
        tile = load_labelled(entry.path, label_resolution_m)
        if entry.split == "test":
            samples = [tile]
        else:
            samples = extract_patches(
                tile, patches_per_scene, patch, seed=seed + number
            )
        for index, sample in enumerate(samples):
            relative = Path("patches") / f"{entry.tile_id}_{index:04d}.rspc"
            save_sample(out / relative, sample)
            result.entries.append(
                ManifestEntry(
                    path=str(relative),
                    tile_id=entry.tile_id,
                    split=entry.split,
                    kind="patch",
                )
            )
    result.save(out / MANIFEST_NAME)
    logger.info("Ingested %d samples into %s", len(result.entries), out)
    return DatasetManifest.load(out / MANIFEST_NAME)


def load_split(
    manifest: DatasetManifest, split: str, label_resolution_m: float = 5.0
) -> List[PatchSample]:
    """
    Raises:
        ConfigurationError: If the split has no entries.
    """
    entries = manifest.split(split)
    if not entries:
        raise ConfigurationError(f"Manifest has no '{split}' entries")
    return [load_labelled(entry.path, label_resolution_m) for entry in entries]
