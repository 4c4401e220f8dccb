"""
Map outputs: raw class raster, indexed-colour image and JSON sidecar.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from PIL import Image

from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import NUM_CLASSES, GeoExtent, RoadClass
from roadseg.ingest.container import json_to_tensor, write_container

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PALETTE = {
    RoadClass.NO_ROAD: (255, 255, 255),
    RoadClass.SMALL: (128, 128, 128),
    RoadClass.MEDIUM: (255, 165, 0),
    RoadClass.BIG: (255, 0, 0),
}
PALETTE_NAMES = {
    RoadClass.NO_ROAD: "white",
    RoadClass.SMALL: "gray",
    RoadClass.MEDIUM: "orange",
    RoadClass.BIG: "red",
}


@dataclass
class MapFiles:
    raster: Path
    image: Path
    sidecar: Path


def _flat_palette() -> list:
    flat = []
    for cls in RoadClass:
        flat.extend(PALETTE[cls])
    # Pillow expects 256 entries; unused ones stay black
    return flat + [0] * (768 - len(flat))


def class_image(classes: np.ndarray) -> Image.Image:
    """8-bit palette image whose indices are the class values."""
    image = Image.fromarray(np.asarray(classes, dtype=np.uint8))
    # putpalette turns the L image into P without touching the indices
    image.putpalette(_flat_palette())
    return image


def read_map_image(path: PathLike) -> np.ndarray:
    """Class raster recovered from a map image's palette indices."""
    with Image.open(path) as image:
        if image.mode != "P":
            raise InvalidArgumentError(f"{path} is not an indexed image")
        return np.array(image, dtype=np.uint8)


def emit_map(
    classes: np.ndarray,
    path: PathLike,
    geo_extent: Optional[GeoExtent] = None,
    resolution_m: float = 5.0,
) -> MapFiles:
    """
    Write a class raster as <path>.rspc, <path>.png and <path>.json.

    Raises:
        InvalidArgumentError: If values fall outside 0..3.
        OSError: If the destination cannot be written.
    """
    classes = np.asarray(classes)
    if classes.ndim != 2:
        raise InvalidArgumentError(
            f"Class raster must be 2-d, got shape {classes.shape}"
        )
    if classes.size and (classes.min() < 0 or classes.max() >= NUM_CLASSES):
        raise InvalidArgumentError("Class raster values must be in 0..3")
    classes = classes.astype(np.uint8)

    base = Path(path)
    if base.suffix in (".rspc", ".png", ".json"):
        base = base.with_suffix("")
    files = MapFiles(
        raster=base.with_suffix(".rspc"),
        image=base.with_suffix(".png"),
        sidecar=base.with_suffix(".json"),
    )
    sidecar = {
        "geo_extent": geo_extent.to_dict() if geo_extent else None,
        "resolution_m": resolution_m,
        "shape": list(classes.shape),
        "legend": {
            cls.name.lower(): {
                "index": int(cls),
                "color": PALETTE_NAMES[cls],
                "rgb": list(PALETTE[cls]),
            }
            for cls in RoadClass
        },
    }
    write_container(
        files.raster,
        {"classes": classes, "meta": json_to_tensor(sidecar)},
    )
    class_image(classes).save(files.image)
    files.sidecar.write_text(json.dumps(sidecar, indent=2), encoding="utf-8")
    logger.info("Wrote map %s (%dx%d)", base, *classes.shape)
    return files
