"""Experiment configuration model and its regime diagnostics."""

from __future__ import annotations

from pathlib import Path
from typing import Self

from pydantic import ConfigDict, Field, field_validator, model_validator

from .base import ReportModel, StrictModel
from .enums import CommandName, ErrorMessage
from .manifold import ManifoldSpec
from .types import Ladder, NonNegativeFloat, PositiveFloat, PositiveInt

__all__ = [
    "ALL_CRITERIA",
    "AcceptanceSection",
    "Diagnostic",
    "ExperimentConfig",
    "GridSection",
    "LadderSection",
    "SurfaceSection",
    "ToleranceSection",
    "validate",
]

ALL_CRITERIA = tuple(range(1, 11))
VERIFIED_HORIZON_MULTIPLE = 20.0
COARSE_COLATITUDES = 16
LARGE_AMPLITUDE = 0.2
LARGE_TRANSLATION = 10.0


class SectionModel(StrictModel):
    """Configuration section accepting both dashed and underscored keys."""

    model_config = ConfigDict(extra="forbid", validate_by_name=True, validate_by_alias=True)


class GridSection(SectionModel):
    """Sphere grid resolutions.

    The defaults, a 24 x 48 full grid refined to 32 x 64 and 96 axisymmetric nodes, are
    coarser than 48 x 96 and 256 nodes but meet the acceptance tolerances.
    ``refined_colatitudes`` sets the grid the full-mode Jacobi spectrum is recomputed on; it
    defaults to 4/3 of ``colatitudes``.
    """

    colatitudes: PositiveInt = 24
    longitudes: PositiveInt | None = None
    axisymmetric_nodes: PositiveInt = Field(default=96, alias="axisymmetric-nodes")
    refined_colatitudes: PositiveInt | None = Field(default=None, alias="refined-colatitudes")

    @model_validator(mode="after")
    def check_refinement(self) -> Self:
        """Validate that the refined grid is finer than the working grid."""
        if self.refined_colatitudes is not None and self.refined_colatitudes <= self.colatitudes:
            msg = ErrorMessage.COARSER_REFINEMENT
            raise ValueError(msg)
        return self


class LadderSection(SectionModel):
    """Radius, volume, and parameter ladders of the sweeps."""

    radii: Ladder = (50.0, 100.0, 200.0, 400.0)
    center_radii: Ladder = Field(default=(100.0, 200.0, 400.0, 800.0), alias="center-radii")
    mass_radii: Ladder = Field(default=(125.0, 250.0, 500.0, 1000.0), alias="mass-radii")
    chart_radii: Ladder = Field(default=(100.0, 316.22776601683796, 1000.0), alias="chart-radii")
    profile_radii: Ladder = Field(default=(2.0, 4.0, 8.0, 16.0, 32.0, 64.0), alias="profile-radii")
    volumes: Ladder = (1.0e3, 1.0e4, 1.0e5, 1.0e6)
    taus: Ladder = (1.25, 1.5, 2.0)
    offsets: tuple[NonNegativeFloat, ...] = (1.5, 2.0)

    @field_validator("radii", "center_radii", "mass_radii", "chart_radii", "profile_radii", "volumes")
    @classmethod
    def check_increasing(cls, ladder: tuple[float, ...]) -> tuple[float, ...]:
        """Validate that a ladder is non-empty and strictly increasing."""
        if not ladder or any(a >= b for a, b in zip(ladder[:-1], ladder[1:], strict=True)):
            msg = ErrorMessage.LADDER_NOT_INCREASING
            raise ValueError(msg)
        return ladder


class SurfaceSection(SectionModel):
    """A single surface: its radius and the seed deformation for Newton."""

    radius: PositiveFloat = 100.0
    seed_degree: int = Field(default=0, ge=0, alias="seed-degree")
    seed_amplitude: float = Field(default=0.0, alias="seed-amplitude")
    eigenvalues: PositiveInt = 6


class ToleranceSection(SectionModel):
    """Pass thresholds of the experiment checks."""

    newton: PositiveFloat = 1e-10
    hawking: PositiveFloat = 1e-10
    curvature: PositiveFloat = 1e-6
    slope: PositiveFloat = 0.3
    chart_slope: PositiveFloat = Field(default=0.2, alias="chart-slope")
    gain: PositiveFloat = 0.1
    spectrum: PositiveFloat = 0.05
    center: PositiveFloat = 1e-2
    iso_mass: PositiveFloat = Field(default=1e-3, alias="iso-mass")
    deficit_floor: float = Field(default=0.5, gt=0.0, le=1.0, alias="deficit-floor")


class AcceptanceSection(SectionModel):
    """Subset of acceptance criteria to run."""

    criteria: tuple[int, ...] = ALL_CRITERIA

    @field_validator("criteria")
    @classmethod
    def check_known(cls, criteria: tuple[int, ...]) -> tuple[int, ...]:
        """Validate that every criterion number exists."""
        if not criteria or any(criterion not in ALL_CRITERIA for criterion in criteria):
            msg = ErrorMessage.UNKNOWN_CRITERION
            raise ValueError(msg)
        return criteria


class ExperimentConfig(StrictModel):
    """Everything a run needs; identical configs give bit-identical numeric outputs."""

    command: CommandName = CommandName.ACCEPTANCE
    manifold: ManifoldSpec = Field(default_factory=ManifoldSpec)
    grid: GridSection = Field(default_factory=GridSection)
    ladders: LadderSection = Field(default_factory=LadderSection)
    surface: SurfaceSection = Field(default_factory=SurfaceSection)
    tolerances: ToleranceSection = Field(default_factory=ToleranceSection)
    acceptance: AcceptanceSection = Field(default_factory=AcceptanceSection)
    output: Path = Path("isofoliate-out")
    threads: PositiveInt = 1
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_command_scope(self) -> Self:
        """Validate that the isoperimetric mass is requested in dimension three only."""
        if self.command is CommandName.ISO_MASS and self.manifold.dimension != 3:  # noqa: PLR2004
            msg = ErrorMessage.ISO_MASS_DIMENSION
            raise ValueError(msg)
        return self


class Diagnostic(ReportModel):
    """A warning about a parameter outside the numerically verified regime."""

    key: str
    value: float
    message: str


def validate(config: ExperimentConfig) -> list[Diagnostic]:
    """Warn about parameters outside the numerically verified regime.

    Schema and range violations never reach this point; they fail model validation.
    """
    diagnostics: list[Diagnostic] = []
    manifold = config.manifold
    if manifold.mass > 0.0:
        r_h = (manifold.mass / 2.0) ** (1.0 / (manifold.dimension - 2))
        floor = VERIFIED_HORIZON_MULTIPLE * r_h
        for key, ladder in (("ladders.radii", config.ladders.radii), ("surface.radius", (config.surface.radius,))):
            if ladder[0] < floor:
                diagnostics.append(
                    Diagnostic(key=key, value=ladder[0], message=f"radius below {floor:g} (20 horizon radii)"),
                )
    if config.grid.colatitudes < COARSE_COLATITUDES:
        diagnostics.append(
            Diagnostic(key="grid.colatitudes", value=config.grid.colatitudes, message="coarse sphere grid"),
        )
    if manifold.perturbation.amplitude > LARGE_AMPLITUDE:
        diagnostics.append(
            Diagnostic(
                key="manifold.perturbation.amplitude",
                value=manifold.perturbation.amplitude,
                message=f"perturbation amplitude above {LARGE_AMPLITUDE}",
            ),
        )
    shift = max((abs(component) for component in manifold.translation), default=0.0)
    if shift > LARGE_TRANSLATION:
        diagnostics.append(
            Diagnostic(key="manifold.translation", value=shift, message=f"translation above {LARGE_TRANSLATION}"),
        )
    return diagnostics
