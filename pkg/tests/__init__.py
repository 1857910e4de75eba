"""Test package for the quantized CS toolkit."""
