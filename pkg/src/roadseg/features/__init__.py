# Road segmentation MCP features package
from roadseg.features import pipeline


def register_all(mcp):
    """
    Register all features with the MCP server.

    Args:
        mcp: The FastMCP server instance
    """
    pipeline.register(mcp)
