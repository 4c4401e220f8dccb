"""
Band catalogue and acquisition calendar of the multispectral input.

Bands are grouped by ground resolution. Each group is fed to the
networks at its own position in the encoder.
"""
from typing import Dict, List, Tuple

FULL_RESOLUTION_M = 10.0

# 10 m, 20 m and 60 m groups, in storage order
BAND_GROUPS: Dict[str, Tuple[str, ...]] = {
    "full": ("B02", "B03", "B04", "B08"),
    "half": ("B05", "B06", "B07", "B8A", "B11", "B12"),
    "sixth": ("B01", "B09", "B10"),
}

# Downsampling factor of each group relative to the 10 m grid
GROUP_FACTORS: Dict[str, int] = {"full": 1, "half": 2, "sixth": 6}

GROUP_NAMES: Tuple[str, ...] = tuple(BAND_GROUPS)

ALL_BANDS: Tuple[str, ...] = tuple(
    band for bands in BAND_GROUPS.values() for band in bands
)


def band_counts() -> Dict[str, int]:
    """Number of bands per group: full=4, half=6, sixth=3."""
    return {name: len(bands) for name, bands in BAND_GROUPS.items()}


def group_resolution_m(group: str) -> float:
    """Ground resolution in metres per pixel of a band group."""
    return FULL_RESOLUTION_M * GROUP_FACTORS[group]


def default_timestamps(
    first_year: int = 2016, last_year: int = 2018
) -> List[Tuple[int, int]]:
    """
    Default acquisition calendar: March, June, September and December of
    every year in the range, i.e. 12 timestamps for 2016-2018.
    """
    return [
        (year, month)
        for year in range(first_year, last_year + 1)
        for month in (3, 6, 9, 12)
    ]
