"""Unit tests for individual modules and components."""