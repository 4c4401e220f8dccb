"""
Model tools for the road segmentation MCP server.

This module provides MCP tools for inspecting architectures and
checkpoints.
"""
from roadseg.features.pipeline.common import (
    PipelineToolError,
    describe_error,
    get_device,
    resolve_path,
)
from roadseg.models.checkpoint import load_checkpoint
from roadseg.models.config import ModelConfig
from roadseg.models.unet import build_model, count_parameters, shape_contract


def _format_shape(shape) -> str:
    return " x ".join(str(side) for side in shape)


def _format_model(config: ModelConfig, parameters: int, size_px: int) -> str:
    """Format a model description as markdown."""
    contract = shape_contract(config, size_px)
    output = f"# {config.variant}\n\n"
    output += f"- Depth: {config.depth}\n"
    output += f"- Base width: {config.base_width}\n"
    output += f"- Timesteps: {config.n_timesteps}\n"
    output += f"- Label upscale: {config.label_upscale}\n"
    output += f"- Parameters: {parameters:,}\n"
    output += (
        f"- Input side must be a multiple of {config.min_input_multiple}\n"
    )
    output += f"\n## Shapes for a {size_px} px patch\n\n"
    for group, shape in contract.inputs.items():
        output += f"- {group}: {_format_shape(shape)}\n"
    output += f"- scores: {_format_shape(contract.output)}\n"
    return output


def register_tools(mcp) -> None:
    """
    Register model tools with the MCP server.

    Args:
        mcp: The FastMCP server instance
    """
    @mcp.tool()
    def describe_model(
        variant: str = "unet_plus",
        depth: int = 4,
        base_width: int = 64,
        size_px: int = 240,
    ) -> str:
        """
        Describes a network variant: parameter count and tensor shapes.

        Use this tool when you need to:
        - Compare the size of unet, unet_plus and the temporal variants
        - Find out which input shapes a variant expects

        Args:
            variant: unet, unet_plus, unet_time_flat or unet_time_3d
            depth: Number of pooling steps
            base_width: Feature maps at the first level
            size_px: Patch side length at 10 m

        Returns:
            Markdown description of the model
        """
        try:
            config = ModelConfig.for_variant(
                variant, depth=depth, base_width=base_width
            )
            if size_px % config.min_input_multiple:
                raise PipelineToolError(
                    f"size_px must be a multiple of "
                    f"{config.min_input_multiple}"
                )
            model = build_model(config)
            return _format_model(config, count_parameters(model), size_px)
        except PipelineToolError as e:
            return f"Error describing model: {str(e)}"
        except Exception as e:
            return f"Error describing model: {describe_error(e)}"

    @mcp.tool()
    def describe_checkpoint(checkpoint_path: str) -> str:
        """
        Describes a trained checkpoint and its training summary.

        Use this tool when you need to:
        - Check which variant a checkpoint file holds
        - See the best validation F1 and epoch of a training run

        Args:
            checkpoint_path: Path to a .rspc checkpoint

        Returns:
            Markdown description of the checkpoint
        """
        try:
            model, summary = load_checkpoint(
                resolve_path(checkpoint_path), get_device()
            )
            config = model.config
            output = _format_model(
                config, count_parameters(model), config.min_input_multiple
            )
            if summary:
                output += "\n## Training\n\n"
                for key, value in summary.items():
                    output += f"- {key}: {value}\n"
            return output
        except PipelineToolError as e:
            return f"Error reading checkpoint: {str(e)}"
        except Exception as e:
            return f"Error reading checkpoint: {describe_error(e)}"
