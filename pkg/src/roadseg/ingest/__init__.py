# Vector labels, patch extraction and the container format
from roadseg.ingest.container import (
    PatchContainer,
    TensorEntry,
    read_container,
    write_container,
)
from roadseg.ingest.manifest import DatasetManifest, ManifestEntry
from roadseg.ingest.osm import map_highway_tag
from roadseg.ingest.patches import extract_patches
from roadseg.ingest.rasterize import rasterize_centerlines
from roadseg.ingest.storage import load_sample, save_sample

__all__ = [
    "DatasetManifest",
    "ManifestEntry",
    "PatchContainer",
    "TensorEntry",
    "extract_patches",
    "load_sample",
    "map_highway_tag",
    "rasterize_centerlines",
    "read_container",
    "save_sample",
    "write_container",
]
