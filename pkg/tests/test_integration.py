"""
Integration tests for the kernel MCP server

These tests start `python -m server serve` and talk to it over stdio to verify:
- Server startup and initialization
- Every tool, end to end
- Error reporting
"""

import pytest
import pytest_asyncio

from helpers.mcp_client import MCPClient

CONTROL = "lin:(![lin] 'm) -o ?[lin] p |- lin:q"


@pytest_asyncio.fixture
async def mcp_client():
    """Create and initialize an MCP client"""
    client = MCPClient()
    await client.start()
    await client.initialize()
    yield client
    await client.stop()


@pytest.mark.asyncio
async def test_server_initialization():
    """Test that the server initializes correctly"""
    client = MCPClient()

    try:
        await client.start()
        result = await client.initialize()

        assert "protocolVersion" in result
        assert "serverInfo" in result
        assert result["serverInfo"]["name"] == "subexp-kernel"
        assert "capabilities" in result
    finally:
        await client.stop()


@pytest.mark.asyncio
async def test_list_tools(mcp_client):
    """Test listing available tools"""
    tools = await mcp_client.list_tools()

    tool_names = {tool["name"] for tool in tools}
    expected_tools = {"parse", "translate", "prove", "synthetics", "check", "fuzz", "signature"}
    assert expected_tools == tool_names

    for tool in tools:
        assert "description" in tool
        assert tool["inputSchema"]["type"] == "object"


@pytest.mark.asyncio
async def test_parse_formula(mcp_client):
    doc = await mcp_client.call_tool_json("parse", {"text": "![lin] (p -o 'n)"})
    assert doc["kind"] == "formula"
    assert doc["text"] == "![lin] (p -o 'n)"
    assert doc["unicode"] == "!_lin (p ⊸ 'n)"
    assert doc["polarity"] == "positive"


@pytest.mark.asyncio
async def test_parse_sequent(mcp_client):
    doc = await mcp_client.call_tool_json(
        "parse", {"text": "u:'n |- lin:p", "sig": "ll", "calculus": "classical"})
    assert doc["kind"] == "sequent"
    assert doc["text"] == "u:'n |- lin:p"


@pytest.mark.asyncio
async def test_translate(mcp_client):
    doc = await mcp_client.call_tool_json(
        "translate", {"text": "lin:p |- lin:p", "direction": "i2c", "mode": "sequent"})
    assert doc["target"] == "lin.l:p |- lin.r:p"
    assert doc["target_signature"] == "split(mall)"


@pytest.mark.asyncio
async def test_prove(mcp_client):
    doc = await mcp_client.call_tool_json(
        "prove", {"text": "lin:'n |- lin:![lin] 'n", "depth": 2})
    assert doc["status"] == "proved"
    assert doc["count"] == 1
    assert len(doc["tree"]["children"]) == 1


@pytest.mark.asyncio
async def test_synthetics(mcp_client):
    doc = await mcp_client.call_tool_json(
        "synthetics", {"text": "lin:(![lin] 'm) -o ?[lin] p |- lin:q",
                       "calculus": "intuitionistic"})
    [rule] = doc["rules"]
    assert rule["premises"] == ["lin:p |- lin:q", "|- lin:'m"]


@pytest.mark.asyncio
async def test_check_bijective(mcp_client):
    doc = await mcp_client.call_tool_json(
        "check", {"text": "lin:p |- lin:p", "direction": "c2i"})
    assert doc["verdict"] == "bijective"
    assert doc["target_conclusion"] == "lin:p, lin:(p -o 'k) |- lin:'k"


@pytest.mark.asyncio
async def test_check_counterexample(mcp_client):
    doc = await mcp_client.call_tool_json("check", {"text": CONTROL, "direction": "naive-i2c"})
    assert doc["verdict"] == "counterexample"
    assert doc["failure"] == "target-rule-without-preimage"


@pytest.mark.asyncio
async def test_check_global(mcp_client):
    doc = await mcp_client.call_tool_json(
        "check", {"text": "lin:p |- lin:p", "direction": "c2i", "global": True})
    assert doc["agreement"] == "agree"


@pytest.mark.asyncio
async def test_fuzz(mcp_client):
    doc = await mcp_client.call_tool_json(
        "fuzz", {"direction": "i2c", "sig": "ll", "count": 10, "seed": 4})
    assert doc["count"] == 10
    assert doc["bijective"] == 10


@pytest.mark.asyncio
async def test_signature(mcp_client):
    doc = await mcp_client.call_tool_json("signature", {"sig": "ll", "split": True})
    assert doc["name"] == "split(ll)"
    assert doc["working"] == "lin.l"
    assert doc["unrestricted"] == ["u.l"]

    check = await mcp_client.call_tool_json("signature", {"sig": "mall", "validate": True})
    assert check["valid"] is True


@pytest.mark.asyncio
async def test_parse_error(mcp_client):
    """Kernel errors come back as text, not as protocol errors"""
    result = await mcp_client.call_tool("parse", {"text": "p * 'n"})
    assert len(result) == 1
    text = result[0]["text"]
    assert text.startswith("Error:") and "Polarity violation" in text


@pytest.mark.asyncio
async def test_unknown_signature(mcp_client):
    text = await mcp_client.call_tool_text("prove", {"text": "lin:p |- lin:p", "sig": "nope"})
    assert text.startswith("Error:") and "neither a builtin" in text


@pytest.mark.asyncio
async def test_unknown_tool(mcp_client):
    text = await mcp_client.call_tool_text("make", {})
    assert text == "Error: Unknown tool: make"


@pytest.mark.asyncio
async def test_sequential_tool_calls(mcp_client):
    """Test that several calls on one connection each get their own answer"""
    first = await mcp_client.call_tool_json("parse", {"text": "p"})
    second = await mcp_client.call_tool_json("parse", {"text": "'n"})
    third = await mcp_client.call_tool_json("check", {"text": "|- lin:'n", "direction": "i2c"})

    assert first["polarity"] == "positive"
    assert second["polarity"] == "negative"
    assert third["verdict"] == "bijective"
