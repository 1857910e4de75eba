"""MCP context management utilities.

Handles application context lifecycle.
"""

from contextlib import asynccontextmanager
from typing import AsyncIterator

from loguru import logger
from mcp.server.fastmcp import FastMCP

from .config.settings import get_settings
from .types import AppContext
from .utils.logs import configure_logging, is_configured


@asynccontextmanager
async def app_lifespan(server: FastMCP) -> AsyncIterator[AppContext]:
    """Manage application lifecycle with typed context.

    Args:
        server: The FastMCP server instance

    Yields:
        AppContext with the loaded settings
    """
    settings = get_settings()
    if not is_configured():
        configure_logging(settings.logging, debug=settings.debug)
    status = settings.validate()
    if not status['is_valid']:
        logger.warning("settings issues: {}", "; ".join(status['issues']))
    try:
        yield AppContext(settings=settings)
    finally:
        logger.debug("QCS server shutting down")
