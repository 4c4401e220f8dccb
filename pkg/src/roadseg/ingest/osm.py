"""
OpenStreetMap highway tag to road class mapping.
"""
from typing import FrozenSet

from roadseg.core.types import RoadClass

BIG_HIGHWAY_TAGS: FrozenSet[str] = frozenset(
    {
        "motorway",
        "motorway_link",
        "primary",
        "primary_link",
        "secondary",
        "secondary_link",
        "tertiary",
        "tertiary_link",
    }
)
MEDIUM_HIGHWAY_TAGS: FrozenSet[str] = frozenset({"unclassified"})


def map_highway_tag(tag: str) -> RoadClass:
    """
    Map an OSM highway tag to a road class.

    Matching is case-sensitive against the lowercase canonical tags. Any
    other non-empty tag is a small road; the empty tag means no road.
    """
    if not tag:
        return RoadClass.NO_ROAD
    if tag in BIG_HIGHWAY_TAGS:
        return RoadClass.BIG
    if tag in MEDIUM_HIGHWAY_TAGS:
        return RoadClass.MEDIUM
    return RoadClass.SMALL
