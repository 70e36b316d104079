"""Base models for configuration and report objects."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict

__all__ = [
    "ReportModel",
    "StrictModel",
]


class StrictModel(BaseModel):
    """Base model with strict configuration."""

    model_config = ConfigDict(extra="forbid")


class ReportModel(BaseModel):
    """Immutable result record that round-trips through JSON."""

    model_config = ConfigDict(extra="forbid", frozen=True)
