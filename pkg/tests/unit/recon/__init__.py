"""Unit tests for the recon package."""
