"""Tests for the noise-control workbench."""
