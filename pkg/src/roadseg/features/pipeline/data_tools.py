"""
Data tools for the road segmentation MCP server.

This module provides MCP tools for road labels and synthetic datasets.
"""
from roadseg.config import clean_timestep
from roadseg.experiments.datasets import generate_dataset, ingest_dataset
from roadseg.features.pipeline.common import (
    PipelineToolError,
    describe_error,
    resolve_path,
)
from roadseg.ingest.manifest import DatasetManifest
from roadseg.ingest.osm import map_highway_tag


def _format_manifest(manifest: DatasetManifest, title: str) -> str:
    """Format a manifest as a markdown summary."""
    output = f"# {title}\n\n"
    for split in ("train", "val", "test"):
        entries = manifest.split(split)
        if entries:
            tiles = sorted({entry.tile_id for entry in entries})
            output += (
                f"- {split}: {len(entries)} containers "
                f"from {len(tiles)} tiles\n"
            )
    return output


def register_tools(mcp) -> None:
    """
    Register data tools with the MCP server.

    Args:
        mcp: The FastMCP server instance
    """
    @mcp.tool()
    def map_osm_highway_tag(tag: str) -> str:
        """
        Looks up the road class of an OpenStreetMap highway tag.

        Use this tool when you need to:
        - Check which label class a road type receives
        - Explain why a road appears as big, medium or small

        Args:
            tag: Value of the highway key (e.g. "primary", "residential")

        Returns:
            The road class name and index
        """
        try:
            road_class = map_highway_tag(tag)
            return (
                f"highway={tag or '(none)'} -> "
                f"{road_class.name.lower()} ({int(road_class)})"
            )
        except Exception as e:
            return f"Error mapping highway tag: {str(e)}"

    @mcp.tool()
    def generate_synthetic_dataset(
        out_dir: str,
        seed: int = 0,
        scenes: int = 2,
        size_px: int = 240,
        timesteps: int = 12,
        test_scenes: int = 1,
        cloud_coverage: float = 0.0,
    ) -> str:
        """
        Renders synthetic multispectral scenes with known road vectors.

        Use this tool when you need to:
        - Create a small dataset to try training or prediction
        - Produce reproducible scenes (same seed, same files)

        Args:
            out_dir: Directory for scene containers and manifest.json
            seed: Random seed
            scenes: Number of training scenes
            size_px: Scene side length at 10 m, a multiple of 12
            timesteps: Number of acquisitions per scene
            test_scenes: Number of held-out test scenes
            cloud_coverage: Cloud fraction per acquisition, 0 to 1

        Returns:
            Summary of the written manifest
        """
        try:
            manifest = generate_dataset(
                resolve_path(out_dir, must_exist=False),
                seed,
                scenes,
                size_px,
                timesteps=timesteps,
                test_scenes=test_scenes,
                cloud_coverage=cloud_coverage,
                clean_timestep=clean_timestep(timesteps),
            )
            return _format_manifest(manifest, f"Synthetic dataset {out_dir}")
        except PipelineToolError as e:
            return f"Error generating dataset: {str(e)}"
        except Exception as e:
            return f"Error generating dataset: {describe_error(e)}"

    @mcp.tool()
    def extract_training_patches(
        manifest_path: str,
        out_dir: str,
        patch_px: int = 96,
        patches_per_scene: int = 16,
        seed: int = 0,
        label_resolution_m: float = 5.0,
    ) -> str:
        """
        Rasterizes road labels and cuts random patches from scenes.

        Use this tool when you need to:
        - Turn generated scenes into a training dataset
        - Prepare 10 m labels (label_resolution_m=10) for the baseline

        Args:
            manifest_path: Scene manifest written by the generator
            out_dir: Directory for patch containers and manifest.json
            patch_px: Patch side length at 10 m, a multiple of 12
            patches_per_scene: Patches per training scene
            seed: Random seed for patch positions
            label_resolution_m: 5 or 10

        Returns:
            Summary of the written manifest
        """
        try:
            source = DatasetManifest.load(resolve_path(manifest_path))
            manifest = ingest_dataset(
                source,
                resolve_path(out_dir, must_exist=False),
                patch_px,
                patches_per_scene,
                seed=seed,
                label_resolution_m=label_resolution_m,
            )
            return _format_manifest(manifest, f"Patches in {out_dir}")
        except PipelineToolError as e:
            return f"Error extracting patches: {str(e)}"
        except Exception as e:
            return f"Error extracting patches: {describe_error(e)}"
