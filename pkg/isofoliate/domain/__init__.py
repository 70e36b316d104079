"""Pydantic models for manifolds, experiment configuration, and reports."""
