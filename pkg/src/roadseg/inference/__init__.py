# Patch and scene prediction, map outputs
from roadseg.inference.maps import MapFiles, emit_map, read_map_image
from roadseg.inference.predict import (
    Prediction,
    load_prediction,
    predict_patch,
    save_prediction,
)
from roadseg.inference.stitch import predict_scene

__all__ = [
    "MapFiles",
    "Prediction",
    "emit_map",
    "load_prediction",
    "predict_patch",
    "predict_scene",
    "read_map_image",
    "save_prediction",
]
