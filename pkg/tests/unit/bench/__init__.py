"""Unit tests for the bench package."""
