# Pipeline tools: data, models, evaluation and maps
from roadseg.features.pipeline import (
    data_tools,
    evaluation_tools,
    model_tools,
)


def register(mcp):
    """
    Register pipeline tools with the MCP server.

    Args:
        mcp: The FastMCP server instance
    """
    data_tools.register_tools(mcp)
    model_tools.register_tools(mcp)
    evaluation_tools.register_tools(mcp)
