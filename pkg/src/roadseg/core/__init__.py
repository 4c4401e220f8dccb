# Domain types and the ordinal label codec
from roadseg.core.errors import (
    ConfigurationError,
    CorruptFileError,
    InvalidArgumentError,
    RoadsegError,
    ShapeError,
)
from roadseg.core.ordinal import (
    decode_ordinal,
    decode_ordinal_raster,
    encode_ordinal,
    encode_ordinal_raster,
    threshold_probs,
)
from roadseg.core.types import (
    NUM_CLASSES,
    ROAD_CLASSES,
    ClassScores,
    GeoExtent,
    MetricsReport,
    OrdinalMask,
    PatchSample,
    RoadClass,
    RoadSegment,
)

__all__ = [
    "NUM_CLASSES",
    "ROAD_CLASSES",
    "ClassScores",
    "ConfigurationError",
    "CorruptFileError",
    "GeoExtent",
    "InvalidArgumentError",
    "MetricsReport",
    "OrdinalMask",
    "PatchSample",
    "RoadClass",
    "RoadSegment",
    "RoadsegError",
    "ShapeError",
    "decode_ordinal",
    "decode_ordinal_raster",
    "encode_ordinal",
    "encode_ordinal_raster",
    "threshold_probs",
]
