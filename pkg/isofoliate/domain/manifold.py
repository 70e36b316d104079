"""Models describing the metric under study."""

from __future__ import annotations

from typing import Self

from pydantic import ConfigDict, Field, model_validator

from .base import StrictModel
from .enums import Description, ErrorMessage, Parity
from .types import Dimension, NonNegativeFloat, PositiveFloat, Vector

__all__ = [
    "ManifoldSpec",
    "PerturbationSpec",
    "pattern_bound",
]


def pattern_bound(dimension: int, gamma: float) -> float:
    """Return the factor by which a unit-amplitude pattern may exceed r^(2-n-gamma) in C^2.

    Patterns are P(x) (r0^2 + |x|^2)^(-e/2) B with deg P <= 2 and e = deg P + n - 2 + gamma;
    the second derivatives pick up at most (deg P + e + 1)^2.
    """
    return (dimension + gamma + 3.0) ** 2


class PerturbationSpec(StrictModel):
    """Smooth symmetric-tensor perturbation h = g - g_m decaying like r^(2-n-gamma).

    An amplitude of zero means the metric is exactly Schwarzschild.
    """

    amplitude: NonNegativeFloat = Field(default=0.0, description=Description.AMPLITUDE)
    parity: Parity = Field(default=Parity.EVEN, description=Description.PARITY)
    pattern: int = Field(default=0, ge=0, description=Description.PATTERN)
    support_radius: PositiveFloat = Field(default=1.0, alias="support-radius", description=Description.SUPPORT_RADIUS)
    decay_constant: PositiveFloat = Field(default=1.0, alias="decay-constant", description=Description.DECAY_CONSTANT)

    model_config = ConfigDict(extra="forbid", validate_by_name=True, validate_by_alias=True)

    @property
    def is_empty(self) -> bool:
        """Whether the perturbation vanishes identically."""
        return self.amplitude == 0.0


class ManifoldSpec(StrictModel):
    """Dimension, mass, decay rate, perturbation, and translation of the metric."""

    dimension: Dimension = Field(default=3, description=Description.DIMENSION)
    mass: NonNegativeFloat = Field(default=2.0, description=Description.MASS)
    gamma: float = Field(default=1.0, description=Description.GAMMA)
    perturbation: PerturbationSpec = Field(default_factory=PerturbationSpec)
    translation: Vector = Field(default=(), description=Description.TRANSLATION)

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        """Validate n >= 3, gamma in (0, 1], and the translation length."""
        if self.dimension < 3:  # noqa: PLR2004
            msg = ErrorMessage.DIMENSION_TOO_SMALL
            raise ValueError(msg)
        if not 0.0 < self.gamma <= 1.0:
            msg = ErrorMessage.GAMMA_OUT_OF_RANGE
            raise ValueError(msg)
        if self.translation and len(self.translation) != self.dimension:
            msg = ErrorMessage.TRANSLATION_LENGTH
            raise ValueError(msg)
        return self

    @model_validator(mode="after")
    def check_perturbation_size(self) -> Self:
        """Validate that the perturbation respects its decay constant."""
        perturbation = self.perturbation
        if perturbation.amplitude * pattern_bound(self.dimension, self.gamma) > perturbation.decay_constant:
            msg = ErrorMessage.PERTURBATION_TOO_LARGE
            raise ValueError(msg)
        return self

    @property
    def shift(self) -> tuple[float, ...]:
        """Translation vector padded to n components."""
        return self.translation or (0.0,) * self.dimension

    @property
    def is_schwarzschild(self) -> bool:
        """Whether the metric is exact (possibly translated) Schwarzschild."""
        return self.perturbation.is_empty

    @property
    def is_even(self) -> bool:
        """Whether the metric is asymptotically even."""
        return self.perturbation.is_empty or self.perturbation.parity is Parity.EVEN

    def with_perturbation(self, **changes: object) -> ManifoldSpec:
        """Return a copy with updated perturbation fields."""
        return self.model_copy(update={"perturbation": self.perturbation.model_copy(update=changes)})
