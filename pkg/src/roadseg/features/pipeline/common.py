"""
Common utilities for pipeline tools.

Tools resolve relative paths against ROADSEG_WORKSPACE (default: the
working directory) and run on ROADSEG_DEVICE.
"""
import os
from pathlib import Path

from roadseg.core.errors import RoadsegError


class PipelineToolError(Exception):
    """Exception raised when a pipeline tool cannot complete."""
    pass


def get_workspace() -> Path:
    """
    Get the directory tool paths are relative to.

    Raises:
        PipelineToolError: If the workspace does not exist
    """
    workspace = Path(os.getenv("ROADSEG_WORKSPACE", "."))
    if not workspace.is_dir():
        raise PipelineToolError(f"Workspace not found: {workspace}")
    return workspace


def resolve_path(path: str, must_exist: bool = True) -> Path:
    """
    Resolve a tool argument path against the workspace.

    Raises:
        PipelineToolError: If must_exist and the path is missing
    """
    candidate = Path(path)
    if not candidate.is_absolute():
        candidate = get_workspace() / candidate
    if must_exist and not candidate.exists():
        raise PipelineToolError(f"No such file: {path}")
    return candidate


def get_device() -> str:
    return os.getenv("ROADSEG_DEVICE", "cpu")


def describe_error(e: Exception) -> str:
    """Short reason for tool error messages."""
    if isinstance(e, RoadsegError):
        return f"{e.kind}: {str(e)}"
    return str(e)
