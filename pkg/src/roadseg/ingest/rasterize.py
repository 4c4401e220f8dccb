"""
Centerline rasterization of road vectors.

Each segment of a polyline is traced with a supercover grid traversal:
every pixel the segment passes through is set, including both side
neighbours when it crosses exactly through a pixel corner. Overlapping
roads keep the higher class.
"""
import logging
import math
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import GeoExtent, RoadSegment

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


def _supercover_cells(p0: Point, p1: Point) -> Iterator[Tuple[int, int]]:
    """
    Yield (row, col) cells crossed by a segment in continuous pixel
    coordinates (x to the right, y downwards).
    """
    x0, y0 = p0
    x1, y1 = p1
    col, row = math.floor(x0), math.floor(y0)
    end_col, end_row = math.floor(x1), math.floor(y1)
    dx, dy = x1 - x0, y1 - y0
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1

    if dx != 0:
        next_x = col + 1 if dx > 0 else col
        t_max_x = (next_x - x0) / dx
        t_delta_x = abs(1.0 / dx)
    else:
        t_max_x = t_delta_x = math.inf
    if dy != 0:
        next_y = row + 1 if dy > 0 else row
        t_max_y = (next_y - y0) / dy
        t_delta_y = abs(1.0 / dy)
    else:
        t_max_y = t_delta_y = math.inf

    yield row, col
    max_steps = abs(end_col - col) + abs(end_row - row) + 2
    for _ in range(max_steps):
        if (col, row) == (end_col, end_row):
            return
        if min(t_max_x, t_max_y) > 1.0:
            return
        if math.isclose(t_max_x, t_max_y, rel_tol=0.0, abs_tol=1e-12):
            # exact corner crossing: both side neighbours are touched
            yield row, col + step_x
            yield row + step_y, col
            col += step_x
            row += step_y
            t_max_x += t_delta_x
            t_max_y += t_delta_y
        elif t_max_x < t_max_y:
            col += step_x
            t_max_x += t_delta_x
        else:
            row += step_y
            t_max_y += t_delta_y
        yield row, col


def _to_pixel_space(
    polyline: Sequence[Point], extent: GeoExtent, resolution_m: float
) -> List[Point]:
    return [
        ((x - extent.xmin) / resolution_m, (extent.ymax - y) / resolution_m)
        for x, y in polyline
    ]


def trace_polyline(
    polyline: Sequence[Point], extent: GeoExtent, resolution_m: float
) -> Iterable[Tuple[int, int]]:
    """All (row, col) cells crossed by a polyline, unclipped."""
    pixels = _to_pixel_space(polyline, extent, resolution_m)
    if len(pixels) == 1:
        x, y = pixels[0]
        yield math.floor(y), math.floor(x)
        return
    for p0, p1 in zip(pixels[:-1], pixels[1:]):
        yield from _supercover_cells(p0, p1)


def rasterize_centerlines(
    segments: Sequence[RoadSegment],
    resolution_m: float,
    extent: GeoExtent,
) -> np.ndarray:
    """
    Burn road centerlines into a class-index raster.

    Args:
        segments: Road vectors in the extent's CRS
        resolution_m: Pixel size in metres
        extent: Raster extent, an integer multiple of the resolution

    Returns:
        uint8 raster (rows, cols) with 0 for no road

    Raises:
        InvalidArgumentError: For an empty extent or a resolution that
            does not divide it.
    """
    rows, cols = extent.grid_shape(resolution_m)
    if rows == 0 or cols == 0:
        raise InvalidArgumentError(f"Empty raster extent {extent}")
    raster = np.zeros((rows, cols), dtype=np.uint8)
    for segment in segments:
        if not segment.polyline or int(segment.road_class) == 0:
            continue
        cells = np.array(
            list(trace_polyline(segment.polyline, extent, resolution_m)),
            dtype=np.int64,
        ).reshape(-1, 2)
        inside = (
            (cells[:, 0] >= 0)
            & (cells[:, 0] < rows)
            & (cells[:, 1] >= 0)
            & (cells[:, 1] < cols)
        )
        cells = cells[inside]
        np.maximum.at(
            raster,
            (cells[:, 0], cells[:, 1]),
            np.uint8(segment.road_class),
        )
    logger.debug(
        "Rasterized %d segments at %.1f m into %dx%d",
        len(segments), resolution_m, rows, cols,
    )
    return raster
