"""MCP tools for the quantized CS toolkit.

This module contains all the tool implementations organized by functionality.
"""
