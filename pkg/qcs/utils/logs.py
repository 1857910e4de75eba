"""loguru setup driven by LoggingConfig."""

import sys
from dataclasses import replace
from typing import Optional

from loguru import logger

from ..config.settings import LoggingConfig, get_settings


_configured: Optional[LoggingConfig] = None


def configure_logging(config: Optional[LoggingConfig] = None, debug: bool = False) -> None:
    """Install the stderr sink and, when configured, a rotating file sink.

    ``debug`` forces DEBUG on both sinks. Calling again replaces the
    previous sinks.
    """
    global _configured
    config = config or get_settings().logging
    if debug:
        config = replace(config, level="DEBUG")

    logger.remove()
    logger.add(sys.stderr, level=config.level, format=config.format)
    if config.file:
        logger.add(
            config.file,
            level=config.level,
            format=config.format,
            rotation=config.rotation,
            retention=config.retention,
        )
    _configured = config


def is_configured() -> bool:
    return _configured is not None
