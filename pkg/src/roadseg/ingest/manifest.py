"""
Dataset manifest: container paths, tile ids and split assignment.
"""
import json
import logging
from pathlib import Path
from typing import List, Literal, Union

from pydantic import BaseModel, Field, ValidationError

from roadseg.core.errors import ConfigurationError

logger = logging.getLogger(__name__)

Split = Literal["train", "val", "test"]
PathLike = Union[str, Path]

MANIFEST_VERSION = 1


class ManifestEntry(BaseModel):
    """One container listed in a manifest."""
    path: str
    tile_id: str
    split: Split
    kind: Literal["scene", "patch"] = "patch"


class DatasetManifest(BaseModel):
    """Container listing with split assignment."""
    version: int = MANIFEST_VERSION
    entries: List[ManifestEntry] = Field(default_factory=list)

    def split(self, name: str) -> List[ManifestEntry]:
        return [entry for entry in self.entries if entry.split == name]

    def tile_ids(self) -> List[str]:
        return sorted({entry.tile_id for entry in self.entries})

    def save(self, path: PathLike) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2))
        logger.info("Wrote manifest with %d entries to %s",
                    len(self.entries), path)

    @classmethod
    def load(cls, path: PathLike) -> "DatasetManifest":
        """
        Load a manifest; entry paths are resolved against its directory.

        Raises:
            ConfigurationError: If the file is missing or malformed.
        """
        path = Path(path)
        try:
            manifest = cls.model_validate(json.loads(path.read_text()))
        except FileNotFoundError:
            raise ConfigurationError(f"Manifest not found: {path}")
        except (ValueError, ValidationError) as e:
            raise ConfigurationError(f"Invalid manifest {path}: {str(e)}")
        for entry in manifest.entries:
            if not Path(entry.path).is_absolute():
                entry.path = str(path.parent / entry.path)
        return manifest
