"""
Tests for the highway tag mapping.
"""
import pytest

from roadseg.core.types import RoadClass
from roadseg.ingest.osm import BIG_HIGHWAY_TAGS, map_highway_tag


class TestMapHighwayTag:
    """Tests for map_highway_tag."""

    @pytest.mark.parametrize(
        "tag, expected",
        [
            ("motorway_link", RoadClass.BIG),
            ("unclassified", RoadClass.MEDIUM),
            ("footway", RoadClass.SMALL),
            ("residential", RoadClass.SMALL),
            ("", RoadClass.NO_ROAD),
        ],
    )
    def test_examples(self, tag, expected):
        assert map_highway_tag(tag) == expected

    def test_big_tags(self):
        """Test the eight big tags."""
        assert len(BIG_HIGHWAY_TAGS) == 8
        for tag in ("motorway", "primary", "secondary", "tertiary"):
            assert map_highway_tag(tag) == RoadClass.BIG
            assert map_highway_tag(f"{tag}_link") == RoadClass.BIG

    def test_case_sensitive(self):
        """Test that capitalized tags are not the canonical ones."""
        assert map_highway_tag("Motorway") == RoadClass.SMALL
        assert map_highway_tag("UNCLASSIFIED") == RoadClass.SMALL

    def test_total(self):
        """Test that arbitrary strings map to exactly one class."""
        for tag in ("x", " ", "primary ", "track", "ü"):
            assert map_highway_tag(tag) in tuple(RoadClass)
