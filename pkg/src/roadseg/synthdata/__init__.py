# Synthetic scenes standing in for multispectral tiles and road vectors
from roadseg.synthdata.scene import (
    SyntheticScene,
    area_average,
    generate_scene,
    load_scene,
    save_scene,
    scene_to_patch,
)

__all__ = [
    "SyntheticScene",
    "area_average",
    "generate_scene",
    "load_scene",
    "save_scene",
    "scene_to_patch",
]
