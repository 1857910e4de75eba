"""Type definitions for the quantized CS toolkit.

Common types shared by the tool surface and the server.
"""

from dataclasses import dataclass
from typing import Any, Dict

from .config.settings import Settings


@dataclass
class AppContext:
    """Application context containing shared resources."""
    settings: Settings


# Common response types
ToolResponse = Dict[str, Any]
