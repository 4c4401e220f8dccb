"""
Evaluation tools for the road segmentation MCP server.

This module provides MCP tools for scoring checkpoints and rendering
stitched prediction maps.
"""
from roadseg.core.types import RoadClass
from roadseg.experiments.compare import evaluate_on_tiles
from roadseg.experiments.datasets import load_labelled, load_split
from roadseg.features.pipeline.common import (
    PipelineToolError,
    describe_error,
    get_device,
    resolve_path,
)
from roadseg.inference.maps import PALETTE_NAMES, emit_map
from roadseg.inference.stitch import predict_scene
from roadseg.ingest.manifest import DatasetManifest
from roadseg.metrics.table import format_report
from roadseg.models.checkpoint import load_checkpoint


def register_tools(mcp) -> None:
    """
    Register evaluation tools with the MCP server.

    Args:
        mcp: The FastMCP server instance
    """
    @mcp.tool()
    def evaluate_checkpoint(
        checkpoint_path: str,
        manifest_path: str,
        split: str = "test",
        patch_px: int = 96,
        timestep: int = -1,
    ) -> str:
        """
        Scores a checkpoint on one split of a dataset manifest.

        Use this tool when you need to:
        - Measure per-class precision, recall, F1 and Jaccard
        - Check how a trained model does on held-out scenes

        Args:
            checkpoint_path: Path to a .rspc checkpoint
            manifest_path: Dataset manifest (scenes or patches)
            split: train, val or test
            patch_px: Window size used to stitch larger tiles
            timestep: Acquisition for single-date variants

        Returns:
            Markdown metrics table
        """
        try:
            device = get_device()
            model, _ = load_checkpoint(resolve_path(checkpoint_path), device)
            manifest = DatasetManifest.load(resolve_path(manifest_path))
            tiles = load_split(
                manifest, split, 10.0 / model.config.label_upscale
            )
            report = evaluate_on_tiles(
                model, tiles, patch_px, timestep, device
            )
            return format_report(report, model.config.variant)
        except PipelineToolError as e:
            return f"Error evaluating checkpoint: {str(e)}"
        except Exception as e:
            return f"Error evaluating checkpoint: {describe_error(e)}"

    @mcp.tool()
    def render_prediction_map(
        checkpoint_path: str,
        scene_path: str,
        out_path: str,
        patch_px: int = 96,
        average: bool = False,
    ) -> str:
        """
        Predicts a whole scene window by window and writes the class map.

        Use this tool when you need to:
        - Produce a colored road map of a scene
        - Inspect where a model finds big, medium and small roads

        Args:
            checkpoint_path: Path to a .rspc checkpoint
            scene_path: Scene or patch container
            out_path: Output path without extension (.rspc, .png, .json)
            patch_px: Window side length at 10 m
            average: Average overlapping windows instead of keeping
                each window's central region

        Returns:
            The written files and the class share of the map
        """
        try:
            device = get_device()
            model, _ = load_checkpoint(resolve_path(checkpoint_path), device)
            scene = load_labelled(
                resolve_path(scene_path), 10.0 / model.config.label_upscale
            )
            prediction = predict_scene(
                model, scene, patch_px, average=average, device=device
            )
            files = emit_map(
                prediction.classes,
                resolve_path(out_path, must_exist=False),
                prediction.geo_extent,
                prediction.resolution_m,
            )
            total = prediction.classes.size
            output = f"# Map {out_path}\n\n"
            output += f"- Image: {files.image}\n"
            output += f"- Raster: {files.raster}\n"
            output += f"- Sidecar: {files.sidecar}\n\n"
            for cls in RoadClass:
                share = (prediction.classes == int(cls)).sum() / total
                output += (
                    f"- {cls.name.lower()} ({PALETTE_NAMES[cls]}): "
                    f"{share:.1%}\n"
                )
            return output
        except PipelineToolError as e:
            return f"Error rendering map: {str(e)}"
        except Exception as e:
            return f"Error rendering map: {describe_error(e)}"
