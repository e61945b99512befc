"""
MCP client for exercising the kernel server over stdio

Speaks JSON-RPC 2.0 line by line with a `subexp serve` subprocess: the
initialize handshake, tools/list and tools/call. Tool results are JSON
documents, so call_tool_json decodes them.
"""

import asyncio
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

logger = logging.getLogger("subexp-test-client")

SERVER_COMMAND = ["python", "-m", "server", "serve"]


class MCPClient:
    """Client for communicating with the kernel server via stdio"""

    def __init__(self, server_command: Optional[List[str]] = None,
                 env: Optional[Dict[str, str]] = None, cwd: Optional[str] = None):
        """
        Args:
            server_command: Command that starts the server (default: python -m server serve)
            env: Extra environment variables for the server
            cwd: Working directory for the server process
        """
        self.server_command = server_command or SERVER_COMMAND
        self.env = env or {}
        self.cwd = cwd
        self.process: Optional[asyncio.subprocess.Process] = None
        self.request_id = 0
        self._initialized = False

    async def start(self) -> None:
        """Start the server subprocess with src/ on PYTHONPATH"""
        logger.info(f"Starting MCP server: {' '.join(self.server_command)}")

        full_env = os.environ.copy()
        full_env |= self.env
        src_dir = Path(__file__).resolve().parent.parent
        existing = full_env.get("PYTHONPATH")
        full_env["PYTHONPATH"] = f"{src_dir}:{existing}" if existing else str(src_dir)

        self.process = await asyncio.create_subprocess_exec(
            *self.server_command,
            stdin=asyncio.subprocess.PIPE,
            stdout=asyncio.subprocess.PIPE,
            stderr=asyncio.subprocess.PIPE,
            env=full_env,
            cwd=self.cwd
        )

    async def stop(self) -> None:
        """Stop the server subprocess"""
        if not self.process:
            return
        try:
            self.process.terminate()
            await asyncio.wait_for(self.process.wait(), timeout=5.0)
        except asyncio.TimeoutError:
            logger.warning("Server didn't terminate gracefully, killing")
            self.process.kill()
            await self.process.wait()

        if self.process.stderr:
            stderr = await self.process.stderr.read()
            if stderr:
                logger.debug(f"Server stderr: {stderr.decode('utf-8', errors='replace')}")

    async def _write(self, message: Dict[str, Any]) -> None:
        if not self.process or not self.process.stdin:
            raise RuntimeError("Server not started")
        line = json.dumps(message) + "\n"
        logger.debug(f"Sending: {line.strip()}")
        self.process.stdin.write(line.encode("utf-8"))
        await self.process.stdin.drain()

    async def send_request(self, method: str, params: Optional[Dict[str, Any]] = None
                           ) -> Dict[str, Any]:
        """
        Send a JSON-RPC request and wait for its response

        Raises:
            RuntimeError: On an empty response, a dead server or a JSON-RPC error
        """
        self.request_id += 1
        await self._write({"jsonrpc": "2.0", "id": self.request_id, "method": method,
                           "params": params or {}})

        response_line = await self.process.stdout.readline()
        response_str = response_line.decode("utf-8").strip()
        logger.debug(f"Received: {response_str}")

        if not response_str:
            if self.process.returncode is not None:
                stderr = await self.process.stderr.read()
                raise RuntimeError(
                    f"Server process died: {stderr.decode('utf-8', errors='replace')}")
            raise RuntimeError("Empty response from server")

        response = json.loads(response_str)
        if "error" in response:
            raise RuntimeError(f"JSON-RPC error: {response['error']}")
        return response

    async def send_notification(self, method: str,
                                params: Optional[Dict[str, Any]] = None) -> None:
        await self._write({"jsonrpc": "2.0", "method": method, "params": params or {}})

    async def initialize(self) -> Dict[str, Any]:
        """Run the initialize handshake and return the server's capabilities"""
        response = await self.send_request(
            "initialize",
            {
                "protocolVersion": "2024-11-05",
                "capabilities": {},
                "clientInfo": {"name": "subexp-test-client", "version": "1.0.0"},
            }
        )
        self._initialized = True
        await self.send_notification("notifications/initialized")
        return response.get("result", {})

    async def list_tools(self) -> List[Dict[str, Any]]:
        if not self._initialized:
            raise RuntimeError("Client not initialized. Call initialize() first.")
        response = await self.send_request("tools/list")
        return response.get("result", {}).get("tools", [])

    async def call_tool(self, tool_name: str,
                        arguments: Optional[Dict[str, Any]] = None) -> List[Dict[str, Any]]:
        """Call a tool and return its content items"""
        if not self._initialized:
            raise RuntimeError("Client not initialized. Call initialize() first.")
        response = await self.send_request(
            "tools/call", {"name": tool_name, "arguments": arguments or {}})
        return response.get("result", {}).get("content", [])

    async def call_tool_text(self, tool_name: str,
                             arguments: Optional[Dict[str, Any]] = None) -> str:
        content = await self.call_tool(tool_name, arguments)
        return "".join(item.get("text", "") for item in content)

    async def call_tool_json(self, tool_name: str,
                             arguments: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        Call a tool and decode its JSON document

        Raises:
            RuntimeError: If the tool answered with an error message
        """
        text = await self.call_tool_text(tool_name, arguments)
        if text.startswith("Error:"):
            raise RuntimeError(text)
        return json.loads(text)

    async def __aenter__(self):
        await self.start()
        await self.initialize()
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        await self.stop()


async def demo():
    """Parse a formula and check an encoding through a live server"""
    async with MCPClient() as client:
        for tool in await client.list_tools():
            print(f"  - {tool['name']}: {tool['description']}")
        print(await client.call_tool_text("parse", {"text": "![lin] (p -o 'n)"}))
        print(await client.call_tool_text(
            "check", {"text": "lin:p |- lin:p", "direction": "c2i"}))


if __name__ == "__main__":
    logging.basicConfig(level=logging.DEBUG)
    asyncio.run(demo())
