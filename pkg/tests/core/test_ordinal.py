"""
Tests for the ordinal label codec.
"""
import itertools

import numpy as np
import pytest
import torch

from roadseg.core.errors import InvalidArgumentError
from roadseg.core.ordinal import (
    decode_ordinal,
    decode_ordinal_raster,
    decode_ordinal_tensor,
    encode_ordinal,
    encode_ordinal_raster,
    ordinal_targets,
    threshold_probs,
)
from roadseg.core.types import RoadClass

# Hand-written decode table over every 3-bit vector
DECODE_ORACLE = {
    (0, 0, 0): RoadClass.NO_ROAD,
    (0, 0, 1): RoadClass.NO_ROAD,
    (0, 1, 0): RoadClass.NO_ROAD,
    (0, 1, 1): RoadClass.NO_ROAD,
    (1, 0, 0): RoadClass.SMALL,
    (1, 0, 1): RoadClass.SMALL,
    (1, 1, 0): RoadClass.MEDIUM,
    (1, 1, 1): RoadClass.BIG,
}


class TestEncodeOrdinal:
    """Tests for encode_ordinal."""

    @pytest.mark.parametrize(
        "road_class, bits",
        [
            (RoadClass.NO_ROAD, (0, 0, 0)),
            (RoadClass.SMALL, (1, 0, 0)),
            (RoadClass.MEDIUM, (1, 1, 0)),
            (RoadClass.BIG, (1, 1, 1)),
        ],
    )
    def test_cumulative_bits(self, road_class, bits):
        """Test that class k sets the first k bits."""
        assert tuple(encode_ordinal(road_class)) == bits

    @pytest.mark.parametrize("bad", [-1, 4, 1.5, True])
    def test_out_of_range(self, bad):
        """Test that invalid classes are rejected."""
        with pytest.raises(InvalidArgumentError):
            encode_ordinal(bad)


class TestDecodeOrdinal:
    """Tests for decode_ordinal."""

    def test_exhaustive_oracle(self):
        """Test every bit vector against the hand-written table."""
        for bits in itertools.product((0, 1), repeat=3):
            assert decode_ordinal(bits) == DECODE_ORACLE[bits]

    def test_ignores_bits_after_a_zero(self):
        """Test the documented inconsistent outputs."""
        assert decode_ordinal((1, 0, 1)) == RoadClass.SMALL
        assert decode_ordinal((0, 1, 0)) == RoadClass.NO_ROAD
        assert decode_ordinal((1, 1, 0)) == RoadClass.MEDIUM

    def test_round_trip(self):
        """Test decode(encode(k)) == k for every class."""
        for road_class in RoadClass:
            assert decode_ordinal(encode_ordinal(road_class)) == road_class

    def test_monotone(self):
        """Test that a bit set after a run of ones never lowers the class."""
        for bits in itertools.product((0, 1), repeat=3):
            for i in range(3):
                if bits[i] == 0 and all(bits[:i]):
                    raised = list(bits)
                    raised[i] = 1
                    assert decode_ordinal(raised) >= decode_ordinal(bits)

    def test_invalid_input(self):
        """Test wrong length and non-binary entries."""
        with pytest.raises(InvalidArgumentError):
            decode_ordinal((1, 0))
        with pytest.raises(InvalidArgumentError):
            decode_ordinal((1, 2, 0))


class TestRasterCodec:
    """Tests for raster and tensor versions of the codec."""

    def setup_method(self):
        rng = np.random.default_rng(4)
        self.labels = rng.integers(0, 4, (16, 12), dtype=np.uint8)

    def test_raster_round_trip(self):
        bits = encode_ordinal_raster(self.labels)
        assert bits.shape == (3, 16, 12)
        np.testing.assert_array_equal(decode_ordinal_raster(bits), self.labels)

    def test_raster_matches_scalar_codec(self):
        bits = encode_ordinal_raster(self.labels)
        for (row, col), value in np.ndenumerate(self.labels):
            np.testing.assert_array_equal(
                bits[:, row, col], encode_ordinal(int(value))
            )

    def test_targets_match_raster_encoding(self):
        """Test that on-the-fly training targets equal the stored encoding."""
        labels = torch.from_numpy(self.labels.astype(np.int64))[None]
        targets = ordinal_targets(labels)
        assert targets.dtype == torch.float32
        np.testing.assert_array_equal(
            targets[0].numpy(), encode_ordinal_raster(self.labels)
        )
        decoded = decode_ordinal_tensor(targets)
        np.testing.assert_array_equal(decoded[0].numpy(), self.labels)

    def test_raster_rejects_bad_labels(self):
        with pytest.raises(InvalidArgumentError):
            encode_ordinal_raster(np.array([[4]]))


class TestThresholdProbs:
    """Tests for threshold_probs."""

    def test_elementwise(self):
        mask = threshold_probs(np.array([0.6, 0.4, 0.9]))
        assert tuple(mask.bits[:, 0, 0]) == (1, 0, 1)

    def test_all_zero(self):
        mask = threshold_probs(np.zeros((3, 4, 4)))
        assert mask.bits.sum() == 0

    def test_boundary_is_negative(self):
        """Test that a probability of exactly t stays 0."""
        mask = threshold_probs(np.full((3, 2, 2), 0.5))
        assert mask.bits.sum() == 0

    @pytest.mark.parametrize("t", [0.0, 1.0, -0.2, 1.5])
    def test_threshold_range(self, t):
        with pytest.raises(InvalidArgumentError):
            threshold_probs(np.zeros((3, 1, 1)), t)
