"""Unit tests for the quant package."""
