"""Unit tests for the model package."""
