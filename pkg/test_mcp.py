#!/usr/bin/env python3
"""
Smoke run of the roadseg MCP server over stdio.

Starts the server, renders a two-scene synthetic dataset into a
temporary workspace and asks for the unet_plus shape summary.
"""
import asyncio
import os
import sys
import tempfile

from mcp.client.session import ClientSession
from mcp.client.stdio import StdioServerParameters, stdio_client

EXPECTED_TOOLS = {
    "generate_synthetic_dataset",
    "describe_model",
    "evaluate_checkpoint",
    "render_prediction_map",
}


def _text(result) -> str:
    return "\n".join(getattr(c, "text", str(c)) for c in result.content)


async def smoke_run(workspace: str) -> bool:
    env = dict(os.environ, MCP_TRANSPORT="stdio", ROADSEG_WORKSPACE=workspace)
    params = StdioServerParameters(
        command=sys.executable, args=["-m", "roadseg.server"], env=env
    )
    async with stdio_client(params) as (read, write):
        async with ClientSession(read, write) as session:
            info = await session.initialize()
            print(f"{info.serverInfo.name} ({info.protocolVersion})")

            names = {t.name for t in (await session.list_tools()).tools}
            missing = EXPECTED_TOOLS - names
            if missing:
                print(f"Missing tools: {sorted(missing)}")
                return False

            generated = await session.call_tool(
                "generate_synthetic_dataset",
                {
                    "out_dir": "scenes", "scenes": 2, "size_px": 48,
                    "timesteps": 2,
                },
            )
            generated = _text(generated)
            print(generated)
            described = await session.call_tool(
                "describe_model", {"variant": "unet_plus", "base_width": 16}
            )
            described = _text(described)
            print(described)
            return not any(
                t.startswith("Error") for t in (generated, described)
            )


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as workspace:
        try:
            ok = asyncio.run(smoke_run(workspace))
        except Exception as e:
            print(f"Error running the MCP server: {e}")
            ok = False
    raise SystemExit(0 if ok else 1)
