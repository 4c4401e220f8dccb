"""
Tests for checkpoint save and load.
"""
import numpy as np
import pytest
import torch

from roadseg.core.errors import ConfigurationError, CorruptFileError
from roadseg.ingest.container import read_container, write_container
from roadseg.models.checkpoint import (
    CONFIG_TENSOR,
    checkpoint_tensors,
    load_checkpoint,
    save_checkpoint,
)
from tests.samples import tiny_model


class TestCheckpoint:
    """Tests for save_checkpoint / load_checkpoint."""

    def setup_method(self):
        self.model = tiny_model("unet_plus")
        # move batch-norm statistics away from their defaults
        self.model.train()
        with torch.no_grad():
            self.model(
                torch.randn(2, 4, 24, 24),
                torch.randn(2, 6, 12, 12),
                torch.randn(2, 3, 4, 4),
            )
        self.model.eval()
        self.inputs = (
            torch.randn(1, 4, 48, 48),
            torch.randn(1, 6, 24, 24),
            torch.randn(1, 3, 8, 8),
        )

    def test_round_trip_same_outputs(self, tmp_path):
        path = save_checkpoint(tmp_path / "model.rspc", self.model)
        loaded, summary = load_checkpoint(path)
        assert summary == {}
        assert not loaded.training
        assert loaded.config == self.model.config
        with torch.no_grad():
            assert torch.equal(loaded(*self.inputs), self.model(*self.inputs))

    def test_temporal_round_trip(self, tmp_path):
        model = tiny_model("unet_time_3d").eval()
        path = save_checkpoint(tmp_path / "model.rspc", model)
        loaded, _ = load_checkpoint(path)
        inputs = (
            torch.randn(1, 4, 3, 24, 24),
            torch.randn(1, 6, 3, 12, 12),
            torch.randn(1, 3, 3, 4, 4),
        )
        with torch.no_grad():
            assert torch.equal(loaded(*inputs), model(*inputs))

    def test_summary(self, tmp_path):
        summary = {"best_epoch": 3, "val_average_f1": 0.5}
        path = save_checkpoint(tmp_path / "m.rspc", self.model, summary)
        assert load_checkpoint(path)[1] == summary

    def test_missing_tensor(self, tmp_path):
        tensors = checkpoint_tensors(self.model)
        del tensors["param/out.weight"]
        write_container(tmp_path / "m.rspc", tensors)
        with pytest.raises(CorruptFileError) as info:
            load_checkpoint(tmp_path / "m.rspc")
        assert info.value.check == "names"

    def test_no_config(self, tmp_path):
        write_container(
            tmp_path / "m.rspc", {"x": np.zeros(2, dtype=np.float32)}
        )
        with pytest.raises(CorruptFileError) as info:
            load_checkpoint(tmp_path / "m.rspc")
        assert info.value.check == "names"

    def test_shape_mismatch(self, tmp_path):
        narrow = checkpoint_tensors(tiny_model("unet_plus", base_width=4))
        tensors = checkpoint_tensors(self.model)
        tensors[CONFIG_TENSOR] = narrow[CONFIG_TENSOR]
        write_container(tmp_path / "m.rspc", tensors)
        with pytest.raises(ConfigurationError):
            load_checkpoint(tmp_path / "m.rspc")

    def test_parameters_stored_as_float32(self, tmp_path):
        path = save_checkpoint(tmp_path / "m.rspc", self.model)
        container = read_container(path)
        assert container["param/out.bias"].dtype == np.float32
        assert container.json(CONFIG_TENSOR)["variant"] == "unet_plus"
