"""Enumerations for manifold, grid, and experiment models."""

from __future__ import annotations

from enum import StrEnum

__all__ = [
    "CommandName",
    "CurvatureMethod",
    "Description",
    "ErrorMessage",
    "GridMode",
    "Parity",
    "ProfileSource",
    "Provenance",
]


class Description(StrEnum):
    """Common field descriptions used across configuration models."""

    DIMENSION = "Dimension n of the asymptotically flat end (n >= 3)."
    MASS = "Mass m of the model Schwarzschild metric in coordinate units."
    GAMMA = "Decay rate gamma in (0, 1] of the perturbation h = g - g_m."
    TRANSLATION = "Coordinate translation q applied to the whole metric."
    AMPLITUDE = "Dimensionless amplitude sigma of the perturbation pattern."
    PARITY = "Parity of the perturbation pattern: even, odd, or mixed."
    PATTERN = "Index into the deterministic enumeration of bump patterns."
    SUPPORT_RADIUS = "Smoothing radius r0 of the radial profile of the pattern."
    DECAY_CONSTANT = "Decay constant C bounding |h|, |dh|, |d2h| at their rates."


class ErrorMessage(StrEnum):
    """Validation and failure messages for configuration and numerical models."""

    DIMENSION_TOO_SMALL = "The dimension must satisfy n >= 3"
    GAMMA_OUT_OF_RANGE = "The decay rate must satisfy 0 < gamma <= 1"
    TRANSLATION_LENGTH = "The translation must have exactly n components"
    PERTURBATION_TOO_LARGE = "The perturbation amplitude exceeds what the decay constant allows"
    ISO_MASS_DIMENSION = "The isoperimetric mass is only defined for n = 3"
    FULL_GRID_DIMENSION = "Full sphere grids are only available for n = 3"
    LADDER_NOT_INCREASING = "Ladder values must be positive and strictly increasing"
    NO_HORIZON = "The horizon radius requires a positive mass"
    INSIDE_HORIZON = "The mean curvature of S_r is not positive for r <= r_h"
    PERTURBED_METRIC = "Closed-form Schwarzschild formulas require an unperturbed metric"
    NEGATIVE_GAP = "The Schwarzschild-cone volume gap came out non-positive"
    INTERSECTING_COMPETITOR = "The competitor ball intersects the horizon ball"
    UNVERIFIED_PROFILE = "Profile flags (area non-decreasing, R >= 0) are not verified"
    DEGENERATE_EMBEDDING = "The graph embedding degenerates (1 + u/R <= 0 somewhere)"
    DEGENERATE_METRIC = "The metric matrix is not positive definite at a sampled point"
    OUT_OF_CHART = "Metric evaluation requested inside |x| < 1/2"
    SINGULAR_JACOBI = "The Jacobi operator is numerically singular"
    NEWTON_DIVERGED = "Newton iteration did not converge"
    INTEGRATION_FAILED = "The ODE integration failed or did not reach its end point"
    CONTINUATION_STALLED = "Continuation step size underflowed"
    AXISYMMETRIC_UNSUPPORTED = "This operation needs the full n = 3 sphere grid"
    FIT_NOT_CONVERGED = "The least-squares sphere fit did not converge"
    INSUFFICIENT_SWEEP = "At least two sweep points are required for a fit"
    UNKNOWN_CRITERION = "Acceptance criteria are numbered 1 to 10"
    COARSER_REFINEMENT = "A refined grid needs more colatitudes than the grid it refines"
    PRECONDITION = "Operation precondition violated"


class Parity(StrEnum):
    """Parity of a perturbation pattern under x -> -x."""

    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


class CurvatureMethod(StrEnum):
    """How a curvature sample was computed."""

    CLOSED_FORM = "closed-form"
    FINITE_DIFFERENCE = "finite-difference"
    JET = "jet"


class Provenance(StrEnum):
    """Origin of a rotationally symmetric profile."""

    SCHWARZSCHILD = "schwarzschild"
    CONE = "cone"
    EUCLIDEAN = "euclidean"
    USER = "user"


class ProfileSource(StrEnum):
    """Origin of an isoperimetric profile point."""

    CENTERED_SPHERE = "centered-sphere"
    OFF_CENTER_COMPETITOR = "off-center-competitor"


class GridMode(StrEnum):
    """Discretization mode of the unit sphere."""

    FULL = "full2sphere"
    AXISYMMETRIC = "axisymmetric"


class CommandName(StrEnum):
    """Subcommands of the batch front end."""

    REPORT_GEOMETRY = "report-geometry"
    HAWKING_PROFILE = "hawking-profile"
    BRAY_CHART = "bray-chart"
    VOLUME_COMPARISON = "volume-comparison"
    CMC_SOLVE = "cmc-solve"
    JACOBI_SPECTRUM = "jacobi-spectrum"
    FOLIATION_SWEEP = "foliation-sweep"
    CENTER_OF_MASS = "center-of-mass"
    ISO_MASS = "iso-mass"
    ACCEPTANCE = "acceptance"
