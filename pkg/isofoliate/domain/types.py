"""Type aliases shared by configuration models."""

from __future__ import annotations

from typing import Annotated

from pydantic import Field

__all__ = [
    "Dimension",
    "Ladder",
    "NonNegativeFloat",
    "PositiveFloat",
    "PositiveInt",
    "Vector",
]

Dimension = Annotated[int, Field(strict=True)]
PositiveFloat = Annotated[float, Field(gt=0.0)]
NonNegativeFloat = Annotated[float, Field(ge=0.0)]
PositiveInt = Annotated[int, Field(gt=0)]
Vector = tuple[float, ...]
Ladder = tuple[PositiveFloat, ...]
