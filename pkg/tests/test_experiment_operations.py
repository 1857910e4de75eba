"""Tests for the experiment tools and the info resource through the MCP client."""

import json

import pytest
from mcp.shared.memory import (
    create_connected_server_and_client_session as client_session,
)

from server import mcp


SMALL_CONFIG = {
    "m": 16,
    "N": 32,
    "K": 2,
    "rates": [2, 3],
    "trials": 2,
    "master_seed": 3,
    "quantizers": ["uniform"],
    "algorithms": ["sp", "qsp"],
    "quantizer_training": "analytic",
}


async def call(client, name, params):
    result = await client.call_tool(name, params)
    return json.loads(result.content[0].text)


@pytest.mark.asyncio
async def test_run_monte_carlo(tmp_path):
    """Summaries per (rate, quantizer, algorithm) and the CSV files."""
    async with client_session(mcp._mcp_server) as client:
        params = {"config": SMALL_CONFIG, "out_dir": str(tmp_path)}
        data = await call(client, "run_monte_carlo", params)
        assert data["status"] == "success"
        keys = [(s["rate"], s["quantizer"], s["algorithm"]) for s in data["summaries"]]
        assert keys == [(2, "uniform", "sp"), (2, "uniform", "qsp"),
                        (3, "uniform", "sp"), (3, "uniform", "qsp")]
        assert sum(s["n"] for s in data["summaries"]) + data["failures"] == 8

        for name in ("records.csv", "summary.csv", "fig1.csv", "fig2a.csv", "fig2b.csv"):
            assert (tmp_path / name).exists()
        assert str(tmp_path / "records.csv") in data["files"]


@pytest.mark.asyncio
async def test_run_monte_carlo_is_reproducible():
    """Same config, same summaries."""
    async with client_session(mcp._mcp_server) as client:
        first = await call(client, "run_monte_carlo", {"config": SMALL_CONFIG})
        second = await call(client, "run_monte_carlo", {"config": SMALL_CONFIG})
        assert first["summaries"] == second["summaries"]
        assert first["files"] == []


@pytest.mark.asyncio
async def test_run_monte_carlo_rejects_bad_config():
    """Unknown keys are configuration errors."""
    async with client_session(mcp._mcp_server) as client:
        data = await call(client, "run_monte_carlo", {"config": {**SMALL_CONFIG, "trails": 3}})
        assert data["status"] == "error"
        assert data["error_type"] == "config"
        assert "trails" in data["message"]


@pytest.mark.asyncio
async def test_clt_check():
    """Many support entries make the measurements close to normal."""
    async with client_session(mcp._mcp_server) as client:
        params = {"m": 128, "K": 64, "N": 256, "n_samples": 10000, "seed": 1}
        data = await call(client, "clt_check", params)
        assert data["status"] == "success"
        assert data["statistic"] < data["critical_value"]
        assert data["n_samples"] == 10000


@pytest.mark.asyncio
async def test_theorem_checks():
    """Entropy-coded bracket and the mismatch bound, one row per rate."""
    async with client_session(mcp._mcp_server) as client:
        data = await call(client, "theorem_check", {"which": "3", "rates": [4, 6]})
        assert data["status"] == "success"
        assert [row["rate"] for row in data["rows"]] == [4, 6]
        assert all(row["bracket_holds"] for row in data["rows"])

        data = await call(client, "theorem_check", {"which": "mismatch", "rates": [6]})
        assert data["rows"][0]["holds"] is True

        data = await call(client, "theorem_check", {"which": "1", "rates": [4]})
        row = data["rows"][0]
        assert row["lloyd_normalized"] < row["uniform_normalized"]


@pytest.mark.asyncio
async def test_theorem_check_unknown():
    """Only 1, 3 and mismatch are known."""
    async with client_session(mcp._mcp_server) as client:
        data = await call(client, "theorem_check", {"which": "2", "rates": [4]})
        assert data["status"] == "error"
        assert data["error_type"] == "validation"


@pytest.mark.asyncio
async def test_tools_info_resource():
    """The info resource lists every registered tool."""
    async with client_session(mcp._mcp_server) as client:
        result = await client.read_resource("info://qcs-tools")
        info = json.loads(result.contents[0].text)
        listed = {name for names in info["categories"].values() for name in names}

        tools = await client.list_tools()
        assert listed == {tool.name for tool in tools.tools}
