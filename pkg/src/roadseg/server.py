"""
roadseg MCP server.

Tools cover synthetic scenes, patch extraction, model and checkpoint
summaries, evaluation and map rendering. MCP_TRANSPORT picks stdio or
sse; ROADSEG_MCP_PORT sets the sse port.
"""
import logging
import os
import sys
from typing import Literal, Optional, cast

from dotenv import load_dotenv
from mcp.server.fastmcp import FastMCP

from roadseg.config import log_level
from roadseg.features import register_all

logger = logging.getLogger(__name__)

Transport = Literal["stdio", "sse"]

TRANSPORTS = ("stdio", "sse")
DEFAULT_PORT = 3001

load_dotenv()


def server_port(value: Optional[str] = None) -> int:
    """Port for sse; falls back to 3001 on unset or unusable values."""
    value = os.getenv("ROADSEG_MCP_PORT") if value is None else value
    if not value:
        return DEFAULT_PORT
    try:
        port = int(value)
    except ValueError:
        port = 0
    if not 0 < port < 65536:
        logger.error(f"Invalid ROADSEG_MCP_PORT: {value}. Using 3001")
        return DEFAULT_PORT
    return port


def resolve_transport(value: Optional[str] = None) -> Transport:
    """MCP_TRANSPORT lower-cased; unknown names fall back to stdio."""
    name = (value or os.getenv("MCP_TRANSPORT") or "stdio").lower()
    if name not in TRANSPORTS:
        logger.error(
            f"Invalid transport mode: {name}. Must be one of: {TRANSPORTS}"
        )
        name = "stdio"
    return cast(Transport, name)


mcp = FastMCP("Road Segmentation", port=server_port())
register_all(mcp)


def main():
    # stdout carries the stdio protocol
    logging.basicConfig(level=log_level(), stream=sys.stderr)
    transport = resolve_transport()
    logger.info("Starting road segmentation server over %s", transport)
    mcp.run(transport=transport)


if __name__ == "__main__":
    main()
