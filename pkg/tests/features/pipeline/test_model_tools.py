"""
Tests for the model tools.
"""
from unittest.mock import patch

import pytest

from roadseg.core.errors import CorruptFileError
from roadseg.features.pipeline.model_tools import _format_model
from roadseg.models.checkpoint import save_checkpoint
from tests.samples import tiny_config, tiny_model


# Mock FastMCP for registering tools
class MockMCP:
    def __init__(self):
        self.tools = {}

    def tool(self):
        def decorator(func):
            self.tools[func.__name__] = func
            return func
        return decorator


@pytest.fixture
def mcp():
    """Fixture to provide mock MCP instance."""
    return MockMCP()


@pytest.fixture
def register_model_tools(mcp):
    """Fixture to register model tools."""
    from roadseg.features.pipeline.model_tools import register_tools
    register_tools(mcp)
    return mcp


class TestModelFormatters:
    """Tests for model formatting functions."""

    def test_format_model(self):
        result = _format_model(tiny_config("unet_time_3d"), 12345, 48)
        assert result.startswith("# unet_time_3d")
        assert "- Parameters: 12,345" in result
        assert "- Timesteps: 3" in result
        assert "multiple of 24" in result
        assert "- full: 4 x 3 x 48 x 48" in result
        assert "- scores: 3 x 96 x 96" in result


class TestModelTools:
    """Tests for model tools."""

    def test_describe_model(self, register_model_tools):
        result = register_model_tools.tools["describe_model"](
            "unet", depth=3, base_width=8, size_px=48
        )
        assert "# unet" in result
        assert "- scores: 3 x 48 x 48" in result

    def test_describe_model_bad_size(self, register_model_tools):
        result = register_model_tools.tools["describe_model"](
            "unet_plus", depth=4, base_width=8, size_px=240 + 24
        )
        assert result == (
            "Error describing model: size_px must be a multiple of 48"
        )

    def test_describe_model_bad_variant(self, register_model_tools):
        result = register_model_tools.tools["describe_model"]("resnet")
        assert result.startswith("Error describing model: config:")

    def test_describe_checkpoint(self, register_model_tools, tmp_path):
        path = save_checkpoint(
            tmp_path / "m.rspc", tiny_model(), {"best_epoch": 4}
        )
        result = register_model_tools.tools["describe_checkpoint"](str(path))
        assert "# unet_plus" in result
        assert "## Training" in result
        assert "- best_epoch: 4" in result

    @patch("roadseg.features.pipeline.model_tools.load_checkpoint")
    def test_describe_checkpoint_corrupt(
        self, mock_load, register_model_tools, tmp_path
    ):
        path = tmp_path / "m.rspc"
        path.write_bytes(b"junk")
        mock_load.side_effect = CorruptFileError("magic", "bad file")
        result = register_model_tools.tools["describe_checkpoint"](str(path))
        assert result == (
            "Error reading checkpoint: corrupt-file: magic: bad file"
        )
