"""Tests for the isofoliate package."""
